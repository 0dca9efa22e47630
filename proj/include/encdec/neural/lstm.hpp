#pragma once

#include <string>

#include "encdec/neural/tensor.hpp"

namespace encdec {

// Peephole LSTM weights. Gate rows are stacked [input; forget; cell; output].
// The input and forget gates peek at the previous cell, the output gate at
// the new one.
template <typename T>
struct LstmView {
  MatMap<T> W;     // 4H x in
  MatMap<T> R;     // 4H x H
  VecMap<T> b;     // 4H
  MatMap<T> peep;  // 3 x H: input, forget, output

  int input_dim() const { return static_cast<int>(W.cols()); }
  int hidden_dim() const { return static_cast<int>(R.cols()); }

  static LstmView Bind(ParamSet<T>& params, const std::string& prefix);
};

template <typename T>
void AddLstmParams(ParamSet<T>& params, const std::string& prefix, int input_dim, int hidden_dim);

// Activations of a run of steps, one column per step.
template <typename T>
struct LstmTrace {
  Matrix<T> x, h_prev, c_prev;
  Matrix<T> i, f, z, o, c, tanh_c, h;

  void Resize(int input_dim, int hidden_dim, int steps);
  int steps() const { return static_cast<int>(h.cols()); }
};

// One step given the precomputed input projection W x + b.
template <typename T>
void LstmStep(const LstmView<T>& w, const Vector<T>& wx_b, const Vector<T>& h_prev, const Vector<T>& c_prev,
              LstmTrace<T>& trace, int col);

// Backpropagates through one recorded step. `dgates` receives the gradient
// of the gate pre-activations; peephole gradients are accumulated into `g`.
// The caller forms R^T dgates and the batched weight gradients.
template <typename T>
void LstmStepBackward(const LstmView<T>& w, const LstmTrace<T>& trace, int col, const Vector<T>& dh,
                      const Vector<T>& dc, Vector<T>& dgates, Vector<T>& dc_prev, LstmView<T>& g);

// g.W += DG X^T, g.R += DG Hprev^T, g.b += sum of DG columns.
template <typename T>
void LstmAccumulateWeightGrads(const LstmTrace<T>& trace, const Matrix<T>& dgates, LstmView<T>& g);

template <typename T>
struct LstmCellOutput {
  Vector<T> h, c;
};

template <typename T>
LstmCellOutput<T> LstmCell(const LstmView<T>& w, const Vector<T>& x, const Vector<T>& h_prev,
                           const Vector<T>& c_prev);

// Runs the recurrence over the columns of `x`, right to left when `reverse`.
// Trace column t always holds sentence position t.
template <typename T>
void LstmForward(const LstmView<T>& w, const Matrix<T>& x, const Vector<T>& h0, const Vector<T>& c0,
                 bool reverse, LstmTrace<T>& trace);

// Given dL/dh for every position, accumulates weight gradients into `g` and
// returns dL/dx, dL/dh0, dL/dc0.
template <typename T>
void LstmBackward(const LstmView<T>& w, const LstmTrace<T>& trace, const Matrix<T>& dh, bool reverse,
                  LstmView<T>& g, Matrix<T>& dx, Vector<T>& dh0, Vector<T>& dc0);

}  // namespace encdec
