// Copyright 2026 The spa2nn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace spa2nn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPA2NN_DEFINE_ERROR(Name)  \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  };

SPA2NN_DEFINE_ERROR(ParameterError)
SPA2NN_DEFINE_ERROR(OverflowError)
SPA2NN_DEFINE_ERROR(InsufficientShares)
SPA2NN_DEFINE_ERROR(TripleReuse)
SPA2NN_DEFINE_ERROR(DisconnectedVertex)
SPA2NN_DEFINE_ERROR(MalformedBranch)
SPA2NN_DEFINE_ERROR(UnknownNeighbor)
SPA2NN_DEFINE_ERROR(EmptyBitgraph)
SPA2NN_DEFINE_ERROR(EmptyDataset)
SPA2NN_DEFINE_ERROR(EmptyIndex)
SPA2NN_DEFINE_ERROR(EmptyLayer)
SPA2NN_DEFINE_ERROR(UnknownElement)
SPA2NN_DEFINE_ERROR(FormatError)

#undef SPA2NN_DEFINE_ERROR

}  // namespace spa2nn
