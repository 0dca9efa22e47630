#include "encdec/neural/attention.hpp"

namespace encdec {

template <typename T>
AttentionView<T> AttentionView<T>::Bind(ParamSet<T>& params, const std::string& prefix) {
  return AttentionView<T>{params.Get(prefix + ".Wh").mat(), params.Get(prefix + ".Ws").mat(),
                          params.Get(prefix + ".b").vec(), params.Get(prefix + ".U").vec()};
}

template <typename T>
void AddAttentionParams(ParamSet<T>& params, const std::string& prefix, int key_dim, int query_dim,
                        int attention_dim) {
  const auto a = static_cast<std::size_t>(attention_dim);
  params.Add(prefix + ".Wh", {a, static_cast<std::size_t>(key_dim)});
  params.Add(prefix + ".Ws", {a, static_cast<std::size_t>(query_dim)});
  params.Add(prefix + ".b", {a});
  params.Add(prefix + ".U", {a});
}

template <typename T>
void AttendSegment(const AttentionView<T>& w, const Matrix<T>& H, const Matrix<T>& keys, const Vector<T>& query,
                   int first, int last, AttentionTrace<T>& tr) {
  tr.first = first;
  tr.last = last;
  if (first > last) {
    tr.alpha.resize(0);
    tr.act.resize(w.U.size(), 0);
    tr.context = Vector<T>::Zero(H.rows());
    return;
  }
  const int len = last - first + 1;
  Vector<T> q = w.Ws * query + w.b;
  tr.act = keys.middleCols(first, len);
  tr.act.colwise() += q;
  tr.act = tr.act.array().tanh().matrix();
  Vector<T> beta = tr.act.transpose() * w.U;
  tr.alpha = Softmax<T>(beta);
  tr.context.noalias() = H.middleCols(first, len) * tr.alpha;
}

template <typename T>
Vector<T> AttendSegmentBackward(const AttentionView<T>& w, const Matrix<T>& H, const AttentionTrace<T>& tr,
                                const Vector<T>& dcontext, Matrix<T>& dH, Matrix<T>& dkeys, AttentionView<T>& g) {
  const int A = static_cast<int>(w.U.size());
  if (tr.empty()) return Vector<T>::Zero(A);
  const int len = tr.last - tr.first + 1;
  // context = H_seg alpha
  dH.middleCols(tr.first, len).noalias() += dcontext * tr.alpha.transpose();
  Vector<T> dalpha = H.middleCols(tr.first, len).transpose() * dcontext;
  const T mean = tr.alpha.dot(dalpha);
  Vector<T> dbeta = (tr.alpha.array() * (dalpha.array() - mean)).matrix();
  // beta_i = U . act_i
  g.U.noalias() += tr.act * dbeta;
  Matrix<T> dpre = (w.U * dbeta.transpose()).array() * (T(1) - tr.act.array().square());
  dkeys.middleCols(tr.first, len) += dpre;
  Vector<T> dq = dpre.rowwise().sum();
  g.b += dq;
  return dq;
}

template <typename T>
Vector<T> AveragePool(const Matrix<T>& H, int first, int last, Vector<T>* weights) {
  if (first > last) {
    if (weights) weights->resize(0);
    return Vector<T>::Zero(H.rows());
  }
  const int len = last - first + 1;
  if (weights) *weights = Vector<T>::Constant(len, T(1) / T(len));
  return H.middleCols(first, len).rowwise().sum() / T(len);
}

template <typename T>
AttentionResult<T> Attend(const AttentionView<T>& w, const Matrix<T>& H, const Vector<T>& query, int a, int b) {
  const int n = static_cast<int>(H.cols());
  if (a <= b && (a < 1 || b > n)) throw ContractViolation("attention range outside the sentence");
  Matrix<T> keys = w.Wh * H;
  AttentionTrace<T> tr;
  AttendSegment(w, H, keys, query, a - 1, b - 1, tr);
  return {tr.context, tr.alpha};
}

#define ENCDEC_INSTANTIATE_ATTENTION(T)                                                                         \
  template struct AttentionView<T>;                                                                             \
  template void AddAttentionParams<T>(ParamSet<T>&, const std::string&, int, int, int);                         \
  template void AttendSegment<T>(const AttentionView<T>&, const Matrix<T>&, const Matrix<T>&, const Vector<T>&, \
                                 int, int, AttentionTrace<T>&);                                                 \
  template Vector<T> AttendSegmentBackward<T>(const AttentionView<T>&, const Matrix<T>&,                        \
                                              const AttentionTrace<T>&, const Vector<T>&, Matrix<T>&,           \
                                              Matrix<T>&, AttentionView<T>&);                                   \
  template Vector<T> AveragePool<T>(const Matrix<T>&, int, int, Vector<T>*);                                   \
  template AttentionResult<T> Attend<T>(const AttentionView<T>&, const Matrix<T>&, const Vector<T>&, int, int);

ENCDEC_INSTANTIATE_ATTENTION(float)
ENCDEC_INSTANTIATE_ATTENTION(double)

}  // namespace encdec
