#pragma once

// Minimal reverse-mode autodiff over 2-D row-major tensors. One Tape owns
// all node storage; handles are indices into it. reset() rewinds the tape to
// its persistent prefix (parameters) without releasing capacity, so repeated
// forward passes do not churn the allocator. The element type is templated:
// float for training, double for finite-difference verification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kemeny/error.hpp"

namespace kemeny {

struct TensorRef {
  int id = -1;
};

enum class Op : std::uint8_t {
  kInput,
  kMatmul,     // a (r x k) * b (k x c)
  kMatmulNT,   // a (r x k) * b^T, b (c x k)
  kAdd,        // same shape
  kAddRowVec,  // a (r x c) + v (1 x c) broadcast over rows
  kScale,      // a * constant
  kRelu,
  kSoftmaxRows,    // optional constant additive mask (1 x c), applied per row
  kLayerNormRows,  // parents: x, gain (1 x c), bias (1 x c)
  kGatherRows,     // embedding lookup: rows of a by constant index list
  kConcatRows,
  kConcatCols,
  kSliceRows,
  kSliceCols,
  kLog,
  kSum,   // 1 x 1
  kMean,  // 1 x 1
};

template <typename T>
class Tape {
 public:
  Tape() = default;

  // --- leaves --------------------------------------------------------------

  TensorRef input(int rows, int cols, const T* data, bool requires_grad) {
    const int id = new_node(Op::kInput, rows, cols, -1, -1, -1);
    Node& n = nodes_[id];
    n.requires_grad = requires_grad;
    n.value.assign(data, data + static_cast<std::size_t>(rows) * cols);
    return {id};
  }

  TensorRef input(int rows, int cols, const std::vector<T>& data,
                  bool requires_grad) {
    if (static_cast<std::size_t>(rows) * cols != data.size()) {
      throw InvalidShapeError("input: " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " does not hold " +
                              std::to_string(data.size()) + " values");
    }
    return input(rows, cols, data.data(), requires_grad);
  }

  // Marks everything created so far as surviving reset(). Parameters are
  // registered once; activations built on top are discarded every pass.
  void freeze_persistent() { persistent_ = live_; }

  void reset() { live_ = persistent_; }

  void clear() {
    live_ = 0;
    persistent_ = 0;
  }

  // --- primitives ------------------------------------------------------------

  TensorRef matmul(TensorRef a, TensorRef b) {
    const int ar = rows(a), ak = cols(a), br = rows(b), bc = cols(b);
    if (ak != br) throw InvalidShapeError(shape_msg("matmul", a, b));
    const int id = new_node(Op::kMatmul, ar, bc, a.id, b.id, -1);
    gemm_nn(nodes_[a.id].value.data(), nodes_[b.id].value.data(),
            nodes_[id].value.data(), ar, ak, bc);
    macs_ += static_cast<std::uint64_t>(ar) * ak * bc;
    return {id};
  }

  TensorRef matmul_nt(TensorRef a, TensorRef b) {
    const int ar = rows(a), ak = cols(a), br = rows(b), bk = cols(b);
    if (ak != bk) throw InvalidShapeError(shape_msg("matmul_nt", a, b));
    const int id = new_node(Op::kMatmulNT, ar, br, a.id, b.id, -1);
    gemm_nt(nodes_[a.id].value.data(), nodes_[b.id].value.data(),
            nodes_[id].value.data(), ar, ak, br);
    macs_ += static_cast<std::uint64_t>(ar) * ak * br;
    return {id};
  }

  TensorRef add(TensorRef a, TensorRef b) {
    const int ar = rows(a), ac = cols(a);
    if (ar != rows(b) || ac != cols(b)) {
      throw InvalidShapeError(shape_msg("add", a, b));
    }
    const int id = new_node(Op::kAdd, ar, ac, a.id, b.id, -1);
    const auto& av = nodes_[a.id].value;
    const auto& bv = nodes_[b.id].value;
    auto& out = nodes_[id].value;
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
    return {id};
  }

  TensorRef add_rowvec(TensorRef a, TensorRef v) {
    const int ar = rows(a), ac = cols(a);
    if (rows(v) != 1 || cols(v) != ac) {
      throw InvalidShapeError(shape_msg("add_rowvec", a, v));
    }
    const int id = new_node(Op::kAddRowVec, ar, ac, a.id, v.id, -1);
    const auto& av = nodes_[a.id].value;
    const auto& vv = nodes_[v.id].value;
    auto& out = nodes_[id].value;
    for (int r = 0; r < ar; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * ac;
      for (int c = 0; c < ac; ++c) out[base + c] = av[base + c] + vv[c];
    }
    return {id};
  }

  TensorRef scale(TensorRef a, double factor) {
    const int ar = rows(a), ac = cols(a);
    const int id = new_node(Op::kScale, ar, ac, a.id, -1, -1);
    nodes_[id].scalar = factor;
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    const T f = static_cast<T>(factor);
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * f;
    return {id};
  }

  TensorRef relu(TensorRef a) {
    const int id = new_node(Op::kRelu, rows(a), cols(a), a.id, -1, -1);
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] > T(0) ? av[i] : T(0);
    return {id};
  }

  // Row-wise softmax. mask, when non-empty, holds one additive term per
  // column (0 keeps, large negative removes) and is a constant: no gradient
  // flows through it.
  TensorRef softmax_rows(TensorRef a, const std::vector<T>& mask = {}) {
    const int ar = rows(a), ac = cols(a);
    if (!mask.empty() && static_cast<int>(mask.size()) != ac) {
      throw InvalidShapeError("softmax_rows: mask size " +
                              std::to_string(mask.size()) + " vs " +
                              std::to_string(ac) + " columns");
    }
    const int id = new_node(Op::kSoftmaxRows, ar, ac, a.id, -1, -1);
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    for (int r = 0; r < ar; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * ac;
      T mx = -std::numeric_limits<T>::infinity();
      for (int c = 0; c < ac; ++c) {
        const T z = av[base + c] + (mask.empty() ? T(0) : mask[c]);
        out[base + c] = z;
        mx = std::max(mx, z);
      }
      T total = T(0);
      for (int c = 0; c < ac; ++c) {
        const T e = std::exp(out[base + c] - mx);
        out[base + c] = e;
        total += e;
      }
      const T inv = T(1) / total;
      for (int c = 0; c < ac; ++c) out[base + c] *= inv;
    }
    return {id};
  }

  // Row-wise layer norm with learned gain and bias (both 1 x cols).
  TensorRef layer_norm_rows(TensorRef x, TensorRef gain, TensorRef bias) {
    const int xr = rows(x), xc = cols(x);
    if (rows(gain) != 1 || cols(gain) != xc) {
      throw InvalidShapeError(shape_msg("layer_norm_rows", x, gain));
    }
    if (rows(bias) != 1 || cols(bias) != xc) {
      throw InvalidShapeError(shape_msg("layer_norm_rows", x, bias));
    }
    const int id = new_node(Op::kLayerNormRows, xr, xc, x.id, gain.id, bias.id);
    Node& n = nodes_[id];
    // aux: x_hat (rows x cols) followed by inv_std (rows), for the backward.
    n.aux.resize(static_cast<std::size_t>(xr) * xc + xr);
    const auto& xv = nodes_[x.id].value;
    const auto& gv = nodes_[gain.id].value;
    const auto& bv = nodes_[bias.id].value;
    for (int r = 0; r < xr; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * xc;
      T mean = T(0);
      for (int c = 0; c < xc; ++c) mean += xv[base + c];
      mean /= static_cast<T>(xc);
      T var = T(0);
      for (int c = 0; c < xc; ++c) {
        const T d = xv[base + c] - mean;
        var += d * d;
      }
      var /= static_cast<T>(xc);
      const T inv_std = T(1) / std::sqrt(var + static_cast<T>(kLayerNormEps));
      n.aux[static_cast<std::size_t>(xr) * xc + r] = inv_std;
      for (int c = 0; c < xc; ++c) {
        const T xhat = (xv[base + c] - mean) * inv_std;
        n.aux[base + c] = xhat;
        n.value[base + c] = xhat * gv[c] + bv[c];
      }
    }
    return {id};
  }

  // Embedding lookup: out row r = a row indices[r].
  TensorRef gather_rows(TensorRef a, const std::vector<int>& indices) {
    const int ar = rows(a), ac = cols(a);
    if (indices.empty()) {
      throw InvalidShapeError("gather_rows: empty index list");
    }
    for (int idx : indices) {
      if (idx < 0 || idx >= ar) {
        throw InvalidShapeError("gather_rows: index " + std::to_string(idx) +
                                " outside " + std::to_string(ar) + " rows");
      }
    }
    const int id = new_node(Op::kGatherRows, static_cast<int>(indices.size()),
                            ac, a.id, -1, -1);
    nodes_[id].indices = indices;
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const std::size_t src = static_cast<std::size_t>(indices[r]) * ac;
      for (int c = 0; c < ac; ++c) out[r * ac + c] = av[src + c];
    }
    return {id};
  }

  TensorRef concat_rows(TensorRef a, TensorRef b) {
    const int ac = cols(a);
    if (ac != cols(b)) throw InvalidShapeError(shape_msg("concat_rows", a, b));
    const int id =
        new_node(Op::kConcatRows, rows(a) + rows(b), ac, a.id, b.id, -1);
    const auto& av = nodes_[a.id].value;
    const auto& bv = nodes_[b.id].value;
    auto& out = nodes_[id].value;
    std::copy(av.begin(), av.end(), out.begin());
    std::copy(bv.begin(), bv.end(), out.begin() + av.size());
    return {id};
  }

  TensorRef concat_cols(TensorRef a, TensorRef b) {
    const int ar = rows(a), ac = cols(a), bc = cols(b);
    if (ar != rows(b)) throw InvalidShapeError(shape_msg("concat_cols", a, b));
    const int oc = ac + bc;
    const int id = new_node(Op::kConcatCols, ar, oc, a.id, b.id, -1);
    const auto& av = nodes_[a.id].value;
    const auto& bv = nodes_[b.id].value;
    auto& out = nodes_[id].value;
    for (int r = 0; r < ar; ++r) {
      std::copy(av.begin() + static_cast<std::size_t>(r) * ac,
                av.begin() + static_cast<std::size_t>(r + 1) * ac,
                out.begin() + static_cast<std::size_t>(r) * oc);
      std::copy(bv.begin() + static_cast<std::size_t>(r) * bc,
                bv.begin() + static_cast<std::size_t>(r + 1) * bc,
                out.begin() + static_cast<std::size_t>(r) * oc + ac);
    }
    return {id};
  }

  TensorRef slice_rows(TensorRef a, int r0, int count) {
    const int ar = rows(a), ac = cols(a);
    if (r0 < 0 || count < 1 || r0 + count > ar) {
      throw InvalidShapeError("slice_rows: [" + std::to_string(r0) + ", " +
                              std::to_string(r0 + count) + ") outside " +
                              std::to_string(ar) + " rows");
    }
    const int id = new_node(Op::kSliceRows, count, ac, a.id, -1, -1);
    nodes_[id].offset = r0;
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    std::copy(av.begin() + static_cast<std::size_t>(r0) * ac,
              av.begin() + static_cast<std::size_t>(r0 + count) * ac, out.begin());
    return {id};
  }

  TensorRef slice_cols(TensorRef a, int c0, int count) {
    const int ar = rows(a), ac = cols(a);
    if (c0 < 0 || count < 1 || c0 + count > ac) {
      throw InvalidShapeError("slice_cols: [" + std::to_string(c0) + ", " +
                              std::to_string(c0 + count) + ") outside " +
                              std::to_string(ac) + " columns");
    }
    const int id = new_node(Op::kSliceCols, ar, count, a.id, -1, -1);
    nodes_[id].offset = c0;
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    for (int r = 0; r < ar; ++r) {
      std::copy(av.begin() + static_cast<std::size_t>(r) * ac + c0,
                av.begin() + static_cast<std::size_t>(r) * ac + c0 + count,
                out.begin() + static_cast<std::size_t>(r) * count);
    }
    return {id};
  }

  TensorRef log(TensorRef a) {
    const int id = new_node(Op::kLog, rows(a), cols(a), a.id, -1, -1);
    const auto& av = nodes_[a.id].value;
    auto& out = nodes_[id].value;
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = std::log(av[i]);
    return {id};
  }

  TensorRef sum(TensorRef a) {
    const int id = new_node(Op::kSum, 1, 1, a.id, -1, -1);
    T total = T(0);
    for (T x : nodes_[a.id].value) total += x;
    nodes_[id].value[0] = total;
    return {id};
  }

  TensorRef mean(TensorRef a) {
    const int ar = rows(a), ac = cols(a);
    const int id = new_node(Op::kMean, 1, 1, a.id, -1, -1);
    T total = T(0);
    for (T x : nodes_[a.id].value) total += x;
    nodes_[id].value[0] = total / static_cast<T>(ar * ac);
    return {id};
  }

  // --- access ------------------------------------------------------------------

  int rows(TensorRef t) const { return node_at(t.id).rows; }
  int cols(TensorRef t) const { return node_at(t.id).cols; }
  const std::vector<T>& value(TensorRef t) const { return node_at(t.id).value; }
  const std::vector<T>& grad(TensorRef t) const { return node_at(t.id).grad; }
  std::vector<T>& mutable_value(TensorRef t) { return node_mut(t.id).value; }

  T scalar_value(TensorRef t) const {
    const Node& n = node_at(t.id);
    if (n.rows != 1 || n.cols != 1) {
      throw InvalidShapeError("scalar_value: tensor is " + shape_of(n));
    }
    return n.value[0];
  }

  std::size_t live_nodes() const { return live_; }
  std::uint64_t mac_count() const { return macs_; }
  void reset_mac_count() { macs_ = 0; }

  // --- backward ------------------------------------------------------------------

  void backward(TensorRef loss) {
    const Node& check = node_at(loss.id);
    if (check.rows != 1 || check.cols != 1) {
      throw InvalidInputError("backward: loss must be a 1x1 scalar, got " +
                              shape_of(check));
    }
    for (int i = 0; i <= loss.id; ++i) {
      Node& n = nodes_[i];
      n.grad.assign(n.value.size(), T(0));
    }
    nodes_[loss.id].grad[0] = T(1);
    for (int id = loss.id; id >= 0; --id) backward_node(id);
  }

 private:
  static constexpr double kLayerNormEps = 1e-5;

  struct Node {
    Op op = Op::kInput;
    int rows = 0;
    int cols = 0;
    int p0 = -1, p1 = -1, p2 = -1;
    bool requires_grad = false;
    double scalar = 0.0;  // scale factor
    int offset = 0;       // slice origin
    std::vector<T> value;
    std::vector<T> grad;
    std::vector<T> aux;        // layer-norm saved stats
    std::vector<int> indices;  // gather rows
  };

  const Node& node_at(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= live_) {
      throw InvalidStateError("tensor handle " + std::to_string(id) +
                              " is not live on this tape");
    }
    return nodes_[id];
  }
  Node& node_mut(int id) {
    return const_cast<Node&>(static_cast<const Tape*>(this)->node_at(id));
  }

  static std::string shape_of(const Node& n) {
    return std::to_string(n.rows) + "x" + std::to_string(n.cols);
  }
  std::string shape_msg(const char* prim, TensorRef a, TensorRef b) const {
    return std::string(prim) + ": incompatible shapes " + shape_of(node_at(a.id)) +
           " and " + shape_of(node_at(b.id));
  }

  int new_node(Op op, int rows, int cols, int p0, int p1, int p2) {
    if (rows < 1 || cols < 1) {
      throw InvalidShapeError("tensor shape " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " is not positive");
    }
    if ((p0 >= 0 && static_cast<std::size_t>(p0) >= live_) ||
        (p1 >= 0 && static_cast<std::size_t>(p1) >= live_) ||
        (p2 >= 0 && static_cast<std::size_t>(p2) >= live_)) {
      throw InvalidStateError("parent handle is not live on this tape");
    }
    if (live_ == nodes_.size()) nodes_.emplace_back();
    Node& n = nodes_[live_];
    n.op = op;
    n.rows = rows;
    n.cols = cols;
    n.p0 = p0;
    n.p1 = p1;
    n.p2 = p2;
    n.requires_grad = false;
    n.scalar = 0.0;
    n.offset = 0;
    n.value.assign(static_cast<std::size_t>(rows) * cols, T(0));
    n.grad.clear();
    n.aux.clear();
    n.indices.clear();
    return static_cast<int>(live_++);
  }

  // C += A * B, i-k-j order for stride-1 inner loops.
  static void gemm_nn(const T* a, const T* b, T* c, int r, int k, int ccols) {
    for (int i = 0; i < r; ++i) {
      T* crow = c + static_cast<std::size_t>(i) * ccols;
      const T* arow = a + static_cast<std::size_t>(i) * k;
      for (int kk = 0; kk < k; ++kk) {
        const T av = arow[kk];
        const T* brow = b + static_cast<std::size_t>(kk) * ccols;
        for (int j = 0; j < ccols; ++j) crow[j] += av * brow[j];
      }
    }
  }

  // C += A * B^T with B (c x k); dot-product form.
  static void gemm_nt(const T* a, const T* b, T* c, int r, int k, int ccols) {
    for (int i = 0; i < r; ++i) {
      const T* arow = a + static_cast<std::size_t>(i) * k;
      T* crow = c + static_cast<std::size_t>(i) * ccols;
      for (int j = 0; j < ccols; ++j) {
        const T* brow = b + static_cast<std::size_t>(j) * k;
        T acc = T(0);
        for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
        crow[j] += acc;
      }
    }
  }

  // C += A^T * B with A (r x k), B (r x c): used by matmul backward.
  static void gemm_tn(const T* a, const T* b, T* c, int r, int k, int ccols) {
    for (int i = 0; i < r; ++i) {
      const T* arow = a + static_cast<std::size_t>(i) * k;
      const T* brow = b + static_cast<std::size_t>(i) * ccols;
      for (int kk = 0; kk < k; ++kk) {
        const T av = arow[kk];
        if (av == T(0)) continue;
        T* crow = c + static_cast<std::size_t>(kk) * ccols;
        for (int j = 0; j < ccols; ++j) crow[j] += av * brow[j];
      }
    }
  }

  void backward_node(int id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) return;
    switch (n.op) {
      case Op::kInput:
        return;
      case Op::kMatmul: {
        Node& a = nodes_[n.p0];
        Node& b = nodes_[n.p1];
        // dA = dC * B^T ; dB = A^T * dC
        gemm_nt(n.grad.data(), b.value.data(), a.grad.data(), a.rows, b.cols,
                a.cols);
        gemm_tn(a.value.data(), n.grad.data(), b.grad.data(), a.rows, a.cols,
                b.cols);
        return;
      }
      case Op::kMatmulNT: {
        Node& a = nodes_[n.p0];
        Node& b = nodes_[n.p1];
        // C = A * B^T: dA = dC * B ; dB = dC^T * A
        gemm_nn(n.grad.data(), b.value.data(), a.grad.data(), a.rows, b.rows,
                a.cols);
        gemm_tn(n.grad.data(), a.value.data(), b.grad.data(), a.rows, b.rows,
                b.cols);
        return;
      }
      case Op::kAdd: {
        Node& a = nodes_[n.p0];
        Node& b = nodes_[n.p1];
        for (std::size_t i = 0; i < n.grad.size(); ++i) {
          a.grad[i] += n.grad[i];
          b.grad[i] += n.grad[i];
        }
        return;
      }
      case Op::kAddRowVec: {
        Node& a = nodes_[n.p0];
        Node& v = nodes_[n.p1];
        for (int r = 0; r < n.rows; ++r) {
          const std::size_t base = static_cast<std::size_t>(r) * n.cols;
          for (int c = 0; c < n.cols; ++c) {
            a.grad[base + c] += n.grad[base + c];
            v.grad[c] += n.grad[base + c];
          }
        }
        return;
      }
      case Op::kScale: {
        Node& a = nodes_[n.p0];
        const T f = static_cast<T>(n.scalar);
        for (std::size_t i = 0; i < n.grad.size(); ++i) a.grad[i] += n.grad[i] * f;
        return;
      }
      case Op::kRelu: {
        Node& a = nodes_[n.p0];
        for (std::size_t i = 0; i < n.grad.size(); ++i) {
          if (a.value[i] > T(0)) a.grad[i] += n.grad[i];
        }
        return;
      }
      case Op::kSoftmaxRows: {
        Node& a = nodes_[n.p0];
        // dz_j = y_j * (dy_j - sum_k dy_k y_k) per row.
        for (int r = 0; r < n.rows; ++r) {
          const std::size_t base = static_cast<std::size_t>(r) * n.cols;
          T dot = T(0);
          for (int c = 0; c < n.cols; ++c) {
            dot += n.grad[base + c] * n.value[base + c];
          }
          for (int c = 0; c < n.cols; ++c) {
            a.grad[base + c] += n.value[base + c] * (n.grad[base + c] - dot);
          }
        }
        return;
      }
      case Op::kLayerNormRows: {
        Node& x = nodes_[n.p0];
        Node& g = nodes_[n.p1];
        Node& b = nodes_[n.p2];
        const int cols = n.cols;
        const T* xhat = n.aux.data();
        const T* inv_std = n.aux.data() + static_cast<std::size_t>(n.rows) * cols;
        const auto& gv = g.value;
        const T inv_cols = T(1) / static_cast<T>(cols);
        for (int r = 0; r < n.rows; ++r) {
          const std::size_t base = static_cast<std::size_t>(r) * cols;
          T sum_dxhat = T(0);
          T sum_dxhat_xhat = T(0);
          for (int c = 0; c < cols; ++c) {
            const T dy = n.grad[base + c];
            const T dxhat = dy * gv[c];
            g.grad[c] += dy * xhat[base + c];
            b.grad[c] += dy;
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * xhat[base + c];
          }
          for (int c = 0; c < cols; ++c) {
            const T dxhat = n.grad[base + c] * gv[c];
            x.grad[base + c] +=
                inv_std[r] * (dxhat - inv_cols * sum_dxhat -
                              xhat[base + c] * inv_cols * sum_dxhat_xhat);
          }
        }
        return;
      }
      case Op::kGatherRows: {
        Node& a = nodes_[n.p0];
        for (std::size_t r = 0; r < n.indices.size(); ++r) {
          const std::size_t dst = static_cast<std::size_t>(n.indices[r]) * n.cols;
          for (int c = 0; c < n.cols; ++c) {
            a.grad[dst + c] += n.grad[r * n.cols + c];
          }
        }
        return;
      }
      case Op::kConcatRows: {
        Node& a = nodes_[n.p0];
        Node& b = nodes_[n.p1];
        for (std::size_t i = 0; i < a.grad.size(); ++i) a.grad[i] += n.grad[i];
        const std::size_t off = a.grad.size();
        for (std::size_t i = 0; i < b.grad.size(); ++i) b.grad[i] += n.grad[off + i];
        return;
      }
      case Op::kConcatCols: {
        Node& a = nodes_[n.p0];
        Node& b = nodes_[n.p1];
        for (int r = 0; r < n.rows; ++r) {
          const std::size_t obase = static_cast<std::size_t>(r) * n.cols;
          for (int c = 0; c < a.cols; ++c) {
            a.grad[static_cast<std::size_t>(r) * a.cols + c] += n.grad[obase + c];
          }
          for (int c = 0; c < b.cols; ++c) {
            b.grad[static_cast<std::size_t>(r) * b.cols + c] +=
                n.grad[obase + a.cols + c];
          }
        }
        return;
      }
      case Op::kSliceRows: {
        Node& a = nodes_[n.p0];
        const std::size_t base = static_cast<std::size_t>(n.offset) * n.cols;
        for (std::size_t i = 0; i < n.grad.size(); ++i) a.grad[base + i] += n.grad[i];
        return;
      }
      case Op::kSliceCols: {
        Node& a = nodes_[n.p0];
        for (int r = 0; r < n.rows; ++r) {
          for (int c = 0; c < n.cols; ++c) {
            a.grad[static_cast<std::size_t>(r) * a.cols + n.offset + c] +=
                n.grad[static_cast<std::size_t>(r) * n.cols + c];
          }
        }
        return;
      }
      case Op::kLog: {
        Node& a = nodes_[n.p0];
        for (std::size_t i = 0; i < n.grad.size(); ++i) {
          a.grad[i] += n.grad[i] / a.value[i];
        }
        return;
      }
      case Op::kSum: {
        Node& a = nodes_[n.p0];
        const T g = n.grad[0];
        for (std::size_t i = 0; i < a.grad.size(); ++i) a.grad[i] += g;
        return;
      }
      case Op::kMean: {
        Node& a = nodes_[n.p0];
        const T g = n.grad[0] / static_cast<T>(a.rows * a.cols);
        for (std::size_t i = 0; i < a.grad.size(); ++i) a.grad[i] += g;
        return;
      }
    }
  }

  std::vector<Node> nodes_;
  std::size_t live_ = 0;
  std::size_t persistent_ = 0;
  std::uint64_t macs_ = 0;
};

// Bias-corrected Adam. Moments are kept in double regardless of the
// parameter precision so long runs do not drift.
template <typename T>
struct AdamState {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  void init(const std::vector<std::size_t>& sizes) {
    m.clear();
    v.clear();
    for (std::size_t s : sizes) {
      m.emplace_back(s, 0.0);
      v.emplace_back(s, 0.0);
    }
    step = 0;
  }
};

// One Adam update over parallel lists of parameter and gradient arrays.
template <typename T>
void adam_step(const std::vector<std::vector<T>*>& params,
               const std::vector<const std::vector<T>*>& grads,
               AdamState<T>& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw InvalidShapeError("adam_step: " + std::to_string(params.size()) +
                            " params, " + std::to_string(grads.size()) +
                            " grads, " + std::to_string(state.m.size()) +
                            " moment slots");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < params.size(); ++t) {
    std::vector<T>& p = *params[t];
    const std::vector<T>& g = *grads[t];
    if (p.size() != g.size() || p.size() != state.m[t].size()) {
      throw InvalidShapeError("adam_step: tensor " + std::to_string(t) + " has " +
                              std::to_string(p.size()) + " params vs " +
                              std::to_string(g.size()) + " grads");
    }
    auto& mt = state.m[t];
    auto& vt = state.v[t];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      mt[i] = state.beta1 * mt[i] + (1.0 - state.beta1) * gi;
      vt[i] = state.beta2 * vt[i] + (1.0 - state.beta2) * gi * gi;
      const double mhat = mt[i] / bc1;
      const double vhat = vt[i] / bc2;
      p[i] -= static_cast<T>(state.learning_rate * mhat /
                             (std::sqrt(vhat) + state.epsilon));
    }
  }
}

}  // namespace kemeny
