// include/narb/layers.h

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

#ifndef NARB_LAYERS_H_
#define NARB_LAYERS_H_

#include <span>
#include <string>
#include <utility>

#include "narb/autodiff.h"

namespace narb {

/// Early fusion: ReLU(W [part_1; ...; part_k] + b).
struct FusionLayer {
  ad::Parameter *weight = nullptr;  // out x in
  ad::Parameter *bias = nullptr;    // out x 1
  std::size_t in_width = 0;
  std::size_t out_width = 0;

  static FusionLayer Create(ad::ParameterSet &params, const std::string &prefix,
                            std::size_t in_width, std::size_t out_width, Rng &rng);

  ad::Var Apply(ad::Tape &tape, std::span<const ad::Var> parts) const;
  ad::Var Apply(ad::Tape &tape, std::initializer_list<ad::Var> parts) const {
    return Apply(tape, std::span<const ad::Var>(parts.begin(), parts.size()));
  }
};

/// Single-layer LSTM. One (4H x (in+H)) matrix holds the input, forget,
/// output and candidate gates in that row order.
struct LstmParams {
  ad::Parameter *weight = nullptr;
  ad::Parameter *bias = nullptr;
  std::size_t input_width = 0;
  std::size_t hidden = 0;

  static LstmParams Create(ad::ParameterSet &params, const std::string &prefix,
                           std::size_t input_width, std::size_t hidden, Rng &rng);

  struct State {
    ad::Var h;
    ad::Var c;
  };

  /// i,f,o = sigmoid, g = tanh; c' = f*c + i*g; h' = o*tanh(c').
  State Step(ad::Tape &tape, ad::Var x, const State &prev) const;
  State Zero(ad::Tape &tape) const;
};

/// Softmax attention with dot-product scores h_dec . h_i over the rows of
/// `encoder`, a T x H matrix (see ad::Stack). Returns (context, weights).
std::pair<ad::Var, ad::Var> DotAttention(ad::Var dec_h, ad::Var encoder);

}  // namespace narb

#endif  // NARB_LAYERS_H_
