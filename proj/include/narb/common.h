// include/narb/common.h

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef NARB_COMMON_H_
#define NARB_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace narb {

/// Runtime failure inside the toolkit (bad input file, shape mismatch,
/// divergence). The CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derives the seed of a named pipeline stage from the user seed.
/// FNV-1a over the stage name, mixed with the seed through splitmix64, so
/// "train-narrator" and "split" never share a random stream.
std::uint64_t StageSeed(std::uint64_t seed, std::string_view stage);

/// Lowercases ASCII and splits on whitespace. The one tokenizer used by the
/// corpus, the vocabulary, retrieval and every metric.
std::vector<std::string> Tokenize(std::string_view text);

std::string ToLower(std::string_view text);

std::string Join(const std::vector<std::string> &words, std::string_view sep = " ");

}  // namespace narb

#endif  // NARB_COMMON_H_
