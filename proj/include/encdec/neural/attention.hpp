#pragma once

#include <string>

#include "encdec/neural/tensor.hpp"

namespace encdec {

// beta_i = U^T tanh(Wh h_i + Ws s + b), alpha = softmax(beta) over a
// segment, context = sum_i alpha_i h_i.
template <typename T>
struct AttentionView {
  MatMap<T> Wh;  // A x D
  MatMap<T> Ws;  // A x S
  VecMap<T> b;   // A
  VecMap<T> U;   // A

  static AttentionView Bind(ParamSet<T>& params, const std::string& prefix);
};

template <typename T>
void AddAttentionParams(ParamSet<T>& params, const std::string& prefix, int key_dim, int query_dim,
                        int attention_dim);

// Positions are 0-based and inclusive; first > last is an empty segment.
template <typename T>
struct AttentionTrace {
  int first = 0;
  int last = -1;
  Vector<T> alpha;  // segment length
  Matrix<T> act;    // A x length, tanh activations
  Vector<T> context;

  bool empty() const { return first > last; }
};

// `keys` = Wh * H, computed once per sentence.
template <typename T>
void AttendSegment(const AttentionView<T>& w, const Matrix<T>& H, const Matrix<T>& keys, const Vector<T>& query,
                   int first, int last, AttentionTrace<T>& trace);

// Accumulates into dH, dkeys, g.U and g.b; returns sum_i dL/d(pre-tanh)_i,
// which the caller maps back through Ws.
template <typename T>
Vector<T> AttendSegmentBackward(const AttentionView<T>& w, const Matrix<T>& H, const AttentionTrace<T>& trace,
                                const Vector<T>& dcontext, Matrix<T>& dH, Matrix<T>& dkeys, AttentionView<T>& g);

// Unweighted mean over a segment, zero when empty. `weights` gets 1/len.
template <typename T>
Vector<T> AveragePool(const Matrix<T>& H, int first, int last, Vector<T>* weights = nullptr);

template <typename T>
struct AttentionResult {
  Vector<T> context;
  Vector<T> weights;  // one entry per position of [a, b]
};

// Attention over the 1-based inclusive range [a, b] of the columns of H;
// a > b yields a zero context and no weights.
template <typename T>
AttentionResult<T> Attend(const AttentionView<T>& w, const Matrix<T>& H, const Vector<T>& query, int a, int b);

}  // namespace encdec
