#include "encdec/neural/lstm.hpp"

namespace encdec {

template <typename T>
LstmView<T> LstmView<T>::Bind(ParamSet<T>& params, const std::string& prefix) {
  return LstmView<T>{params.Get(prefix + ".W").mat(), params.Get(prefix + ".R").mat(),
                     params.Get(prefix + ".b").vec(), params.Get(prefix + ".peep").mat()};
}

template <typename T>
void AddLstmParams(ParamSet<T>& params, const std::string& prefix, int input_dim, int hidden_dim) {
  const auto in = static_cast<std::size_t>(input_dim);
  const auto hid = static_cast<std::size_t>(hidden_dim);
  params.Add(prefix + ".W", {4 * hid, in});
  params.Add(prefix + ".R", {4 * hid, hid});
  params.Add(prefix + ".b", {4 * hid});
  params.Add(prefix + ".peep", {3, hid});
}

template <typename T>
void LstmTrace<T>::Resize(int input_dim, int hidden_dim, int steps) {
  x.setZero(input_dim, steps);
  for (Matrix<T>* m : {&h_prev, &c_prev, &i, &f, &z, &o, &c, &tanh_c, &h}) m->setZero(hidden_dim, steps);
}

template <typename T>
void LstmStep(const LstmView<T>& w, const Vector<T>& wx_b, const Vector<T>& h_prev, const Vector<T>& c_prev,
              LstmTrace<T>& tr, int col) {
  const int H = w.hidden_dim();
  Vector<T> pre = wx_b + w.R * h_prev;
  auto sigmoid = [](T v) { return Sigmoid(v); };
  auto tanh = [](T v) { return std::tanh(v); };
  tr.h_prev.col(col) = h_prev;
  tr.c_prev.col(col) = c_prev;
  tr.i.col(col) = (pre.segment(0, H) + w.peep.row(0).transpose().cwiseProduct(c_prev)).unaryExpr(sigmoid);
  tr.f.col(col) = (pre.segment(H, H) + w.peep.row(1).transpose().cwiseProduct(c_prev)).unaryExpr(sigmoid);
  tr.z.col(col) = pre.segment(2 * H, H).unaryExpr(tanh);
  tr.c.col(col) = tr.f.col(col).cwiseProduct(c_prev) + tr.i.col(col).cwiseProduct(tr.z.col(col));
  tr.o.col(col) =
      (pre.segment(3 * H, H) + w.peep.row(2).transpose().cwiseProduct(tr.c.col(col))).unaryExpr(sigmoid);
  tr.tanh_c.col(col) = tr.c.col(col).unaryExpr(tanh);
  tr.h.col(col) = tr.o.col(col).cwiseProduct(tr.tanh_c.col(col));
}

template <typename T>
void LstmStepBackward(const LstmView<T>& w, const LstmTrace<T>& tr, int col, const Vector<T>& dh,
                      const Vector<T>& dc_in, Vector<T>& dgates, Vector<T>& dc_prev, LstmView<T>& g) {
  const int H = w.hidden_dim();
  const auto i = tr.i.col(col).array();
  const auto f = tr.f.col(col).array();
  const auto z = tr.z.col(col).array();
  const auto o = tr.o.col(col).array();
  const auto c = tr.c.col(col).array();
  const auto tc = tr.tanh_c.col(col).array();
  const auto cp = tr.c_prev.col(col).array();
  const auto p_i = w.peep.row(0).transpose().array();
  const auto p_f = w.peep.row(1).transpose().array();
  const auto p_o = w.peep.row(2).transpose().array();

  dgates.resize(4 * H);
  Vector<T> dgo = (dh.array() * tc * o * (T(1) - o)).matrix();
  Vector<T> dc = (dc_in.array() + dh.array() * o * (T(1) - tc * tc) + dgo.array() * p_o).matrix();
  Vector<T> dgi = (dc.array() * z * i * (T(1) - i)).matrix();
  Vector<T> dgf = (dc.array() * cp * f * (T(1) - f)).matrix();
  Vector<T> dgz = (dc.array() * i * (T(1) - z * z)).matrix();
  dc_prev = (dc.array() * f + dgi.array() * p_i + dgf.array() * p_f).matrix();

  g.peep.row(0) += (dgi.array() * cp).matrix().transpose();
  g.peep.row(1) += (dgf.array() * cp).matrix().transpose();
  g.peep.row(2) += (dgo.array() * c).matrix().transpose();

  dgates.segment(0, H) = dgi;
  dgates.segment(H, H) = dgf;
  dgates.segment(2 * H, H) = dgz;
  dgates.segment(3 * H, H) = dgo;
}

template <typename T>
void LstmAccumulateWeightGrads(const LstmTrace<T>& tr, const Matrix<T>& dgates, LstmView<T>& g) {
  g.W.noalias() += dgates * tr.x.transpose();
  g.R.noalias() += dgates * tr.h_prev.transpose();
  g.b += dgates.rowwise().sum();
}

template <typename T>
LstmCellOutput<T> LstmCell(const LstmView<T>& w, const Vector<T>& x, const Vector<T>& h_prev,
                           const Vector<T>& c_prev) {
  if (x.size() != w.input_dim() || h_prev.size() != w.hidden_dim() || c_prev.size() != w.hidden_dim()) {
    throw ContractViolation("lstm cell: dimension mismatch");
  }
  LstmTrace<T> tr;
  tr.Resize(w.input_dim(), w.hidden_dim(), 1);
  tr.x.col(0) = x;
  Vector<T> wx_b = w.W * x + w.b;
  LstmStep(w, wx_b, h_prev, c_prev, tr, 0);
  return {tr.h.col(0), tr.c.col(0)};
}

template <typename T>
void LstmForward(const LstmView<T>& w, const Matrix<T>& x, const Vector<T>& h0, const Vector<T>& c0,
                 bool reverse, LstmTrace<T>& tr) {
  const int n = static_cast<int>(x.cols());
  if (x.rows() != w.input_dim()) throw ContractViolation("lstm: input dimension mismatch");
  tr.Resize(w.input_dim(), w.hidden_dim(), n);
  tr.x = x;
  Matrix<T> wx = w.W * x;
  wx.colwise() += w.b;
  Vector<T> h = h0, c = c0;
  for (int k = 0; k < n; ++k) {
    const int t = reverse ? n - 1 - k : k;
    Vector<T> in = wx.col(t);
    LstmStep(w, in, h, c, tr, t);
    h = tr.h.col(t);
    c = tr.c.col(t);
  }
}

template <typename T>
void LstmBackward(const LstmView<T>& w, const LstmTrace<T>& tr, const Matrix<T>& dh_out, bool reverse,
                  LstmView<T>& g, Matrix<T>& dx, Vector<T>& dh0, Vector<T>& dc0) {
  const int n = tr.steps();
  const int H = w.hidden_dim();
  Matrix<T> dgates(4 * H, n);
  Vector<T> dh_rec = Vector<T>::Zero(H), dc_rec = Vector<T>::Zero(H);
  Vector<T> dg, dc_prev;
  for (int k = n - 1; k >= 0; --k) {
    const int t = reverse ? n - 1 - k : k;
    Vector<T> dh = dh_out.col(t) + dh_rec;
    LstmStepBackward(w, tr, t, dh, dc_rec, dg, dc_prev, g);
    dgates.col(t) = dg;
    dh_rec.noalias() = w.R.transpose() * dg;
    dc_rec = dc_prev;
  }
  LstmAccumulateWeightGrads(tr, dgates, g);
  dx.noalias() = w.W.transpose() * dgates;
  dh0 = dh_rec;
  dc0 = dc_rec;
}

#define ENCDEC_INSTANTIATE_LSTM(T)                                                                              \
  template struct LstmView<T>;                                                                                  \
  template struct LstmTrace<T>;                                                                                 \
  template void AddLstmParams<T>(ParamSet<T>&, const std::string&, int, int);                                   \
  template void LstmStep<T>(const LstmView<T>&, const Vector<T>&, const Vector<T>&, const Vector<T>&,            \
                            LstmTrace<T>&, int);                                                                \
  template void LstmStepBackward<T>(const LstmView<T>&, const LstmTrace<T>&, int, const Vector<T>&,             \
                                    const Vector<T>&, Vector<T>&, Vector<T>&, LstmView<T>&);                    \
  template void LstmAccumulateWeightGrads<T>(const LstmTrace<T>&, const Matrix<T>&, LstmView<T>&);              \
  template LstmCellOutput<T> LstmCell<T>(const LstmView<T>&, const Vector<T>&, const Vector<T>&,               \
                                         const Vector<T>&);                                                     \
  template void LstmForward<T>(const LstmView<T>&, const Matrix<T>&, const Vector<T>&, const Vector<T>&, bool,   \
                               LstmTrace<T>&);                                                                  \
  template void LstmBackward<T>(const LstmView<T>&, const LstmTrace<T>&, const Matrix<T>&, bool, LstmView<T>&, \
                                Matrix<T>&, Vector<T>&, Vector<T>&);

ENCDEC_INSTANTIATE_LSTM(float)
ENCDEC_INSTANTIATE_LSTM(double)

}  // namespace encdec
