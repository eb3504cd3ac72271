// src/layers.cc

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

#include "narb/layers.h"

#include "narb/common.h"

namespace narb {

FusionLayer FusionLayer::Create(ad::ParameterSet &params, const std::string &prefix,
                                std::size_t in_width, std::size_t out_width, Rng &rng) {
  FusionLayer f;
  f.weight = &params.AddGlorot(prefix + ".W", out_width, in_width, rng);
  f.bias = &params.Add(prefix + ".b", out_width, 1);
  f.in_width = in_width;
  f.out_width = out_width;
  return f;
}

ad::Var FusionLayer::Apply(ad::Tape &tape, std::span<const ad::Var> parts) const {
  ad::Var x = parts.size() == 1 ? parts[0] : ad::Concat(parts);
  if (x.rows() != in_width || x.cols() != 1)
    throw Error("fuse: input width " + std::to_string(x.rows()) + " does not match layer width " +
                std::to_string(in_width) + " (" + weight->name + ")");
  return ad::Relu(ad::Add(ad::Matmul(tape.Param(*weight), x), tape.Param(*bias)));
}

LstmParams LstmParams::Create(ad::ParameterSet &params, const std::string &prefix,
                              std::size_t input_width, std::size_t hidden, Rng &rng) {
  LstmParams p;
  p.weight = &params.AddGlorot(prefix + ".W", 4 * hidden, input_width + hidden, rng);
  p.bias = &params.Add(prefix + ".b", 4 * hidden, 1);
  p.input_width = input_width;
  p.hidden = hidden;
  return p;
}

LstmParams::State LstmParams::Zero(ad::Tape &tape) const {
  return {tape.Constant(Tensor(hidden, 1)), tape.Constant(Tensor(hidden, 1))};
}

LstmParams::State LstmParams::Step(ad::Tape &tape, ad::Var x, const State &prev) const {
  if (x.rows() != input_width || prev.h.rows() != hidden || prev.c.rows() != hidden)
    throw Error("lstm_step: widths x=" + std::to_string(x.rows()) + " h=" +
                std::to_string(prev.h.rows()) + " c=" + std::to_string(prev.c.rows()) +
                " do not match " + weight->name + " (in " + std::to_string(input_width) +
                ", hidden " + std::to_string(hidden) + ")");
  ad::Var z = ad::Add(ad::Matmul(tape.Param(*weight), ad::Concat({x, prev.h})),
                      tape.Param(*bias));
  const std::size_t H = hidden;
  ad::Var i = ad::Sigmoid(ad::Slice(z, 0, H));
  ad::Var f = ad::Sigmoid(ad::Slice(z, H, H));
  ad::Var o = ad::Sigmoid(ad::Slice(z, 2 * H, H));
  ad::Var g = ad::Tanh(ad::Slice(z, 3 * H, H));
  ad::Var c = ad::Add(ad::Mul(f, prev.c), ad::Mul(i, g));
  ad::Var h = ad::Mul(o, ad::Tanh(c));
  return {h, c};
}

std::pair<ad::Var, ad::Var> DotAttention(ad::Var dec_h, ad::Var encoder) {
  if (encoder.cols() != dec_h.rows())
    throw Error("attend: decoder width " + std::to_string(dec_h.rows()) +
                " != encoder width " + std::to_string(encoder.cols()));
  ad::Var weights = ad::Softmax(ad::Matmul(encoder, dec_h));
  ad::Var context = ad::Matmul(ad::Transpose(encoder), weights);
  return {context, weights};
}

}  // namespace narb
