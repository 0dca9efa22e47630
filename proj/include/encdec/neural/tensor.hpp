#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "encdec/error.hpp"

namespace encdec {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using RowMajorMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMajorMatrix<T>>;
template <typename T>
using VecMap = Eigen::Map<Vector<T>>;

// Parameter storage is aligned so vectorized kernels split work the same
// way on every run; with unaligned heap blocks float sums could differ
// between otherwise identical runs.
template <typename T>
using AlignedVector = std::vector<T, Eigen::aligned_allocator<T>>;

// Dense row-major array. Vectors have rank 1, weight matrices rank 2 with
// shape {rows, cols}; embedding tables are {entries, dim}.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (auto d : shape_) n *= d;
    data_.assign(n, T(0));
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  AlignedVector<T>& values() { return data_; }
  const AlignedVector<T>& values() const { return data_; }

  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  MatMap<T> mat() { return MatMap<T>(data_.data(), rows(), cols()); }
  VecMap<T> vec() { return VecMap<T>(data_.data(), size()); }

  bool AllFinite() const {
    for (T x : data_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<std::size_t> shape_;
  AlignedVector<T> data_;
};

// Named parameter blocks in insertion order. Blocks marked non-trainable are
// skipped by the optimizer and the L2 term.
template <typename T>
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Tensor<T> tensor;
    bool trainable = true;
  };

  Tensor<T>& Add(const std::string& name, std::vector<std::size_t> shape, bool trainable = true) {
    if (index_.count(name)) throw ContractViolation("duplicate parameter '" + name + "'");
    index_[name] = entries_.size();
    entries_.push_back({name, Tensor<T>(std::move(shape)), trainable});
    return entries_.back().tensor;
  }

  bool Has(const std::string& name) const { return index_.count(name) > 0; }

  Tensor<T>& Get(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ContractViolation("no parameter named '" + name + "'");
    return entries_[it->second].tensor;
  }
  const Tensor<T>& Get(const std::string& name) const {
    return const_cast<ParamSet*>(this)->Get(name);
  }

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

  void SetZero() {
    for (auto& e : entries_) std::fill(e.tensor.values().begin(), e.tensor.values().end(), T(0));
  }

  // Same layout, zero values.
  ParamSet ZerosLike() const {
    ParamSet out;
    for (const auto& e : entries_) out.Add(e.name, e.tensor.shape(), e.trainable);
    return out;
  }

  template <typename U>
  ParamSet<U> Cast() const {
    ParamSet<U> out;
    for (const auto& e : entries_) {
      auto& t = out.Add(e.name, e.tensor.shape(), e.trainable);
      for (std::size_t i = 0; i < e.tensor.size(); ++i) t.data()[i] = static_cast<U>(e.tensor.data()[i]);
    }
    return out;
  }

  std::size_t NumValues(bool trainable_only = false) const {
    std::size_t n = 0;
    for (const auto& e : entries_) {
      if (!trainable_only || e.trainable) n += e.tensor.size();
    }
    return n;
  }

  bool operator==(const ParamSet& o) const {
    if (entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = o.entries_[i];
      if (a.name != b.name || a.trainable != b.trainable || !(a.tensor == b.tensor)) return false;
    }
    return true;
  }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

template <typename T>
Vector<T> Softmax(const Vector<T>& logits) {
  const T m = logits.maxCoeff();
  Vector<T> e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

template <typename T>
T Sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

}  // namespace encdec
