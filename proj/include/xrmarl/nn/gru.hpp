#pragma once

#include <cstdint>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

// One gate block: pre-activation = w_in * x + w_rec * h + bias.
struct GruGate {
  Matrix w_in;   // hidden x in
  Matrix w_rec;  // hidden x hidden
  Matrix bias;   // hidden x 1
};

// Convention: the reset gate multiplies the hidden state before the
// candidate's recurrent product:
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   c = tanh(Wh x + Uh (r.h) + bh)
//   h' = (1 - z).h + z.c
struct GruCell {
  GruGate update;
  GruGate reset;
  GruGate candidate;
  Index hidden_size = 0;
  Index input_size = 0;
};

GruCell make_gru(Index input, Index hidden, std::uint64_t seed);

Vector gru_step(const GruCell& cell, const Vector& input, const Vector& hidden);
// Batched: each column is one sequence element of an independent sample.
Matrix gru_step(const GruCell& cell, const Matrix& inputs,
                const Matrix& hidden);

}  // namespace xrmarl::nn
