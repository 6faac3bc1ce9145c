// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/nn/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "skygan/common/errors.hpp"

namespace skygan::nn {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

thread_local bool g_grad_enabled = true;

// Wraps a freshly computed value. The node joins the graph only when some
// input needs a gradient; otherwise it is a constant.
template <typename T, typename Backward>
Var<T> make_op(Tensor<T> value, std::initializer_list<Var<T>> inputs, Backward&& backward) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  bool needs = false;
  if (grad_enabled()) for (const auto& v : inputs) needs = needs || (v.defined() && v.requires_grad());
  if (needs) {
    node->requires_grad = true;
    for (const auto& v : inputs) {
      if (v.defined()) node->parents.push_back(v.node());
    }
    node->backward_fn = std::forward<Backward>(backward);
  }
  return Var<T>(std::move(node));
}

template <typename T>
bool wants(const std::shared_ptr<Node<T>>& n) {
  return n && n->requires_grad;
}

template <typename T>
Tensor<T> scalar_tensor(double v) {
  return Tensor<T>(Shape{1, 1, 1, 1}, static_cast<T>(v));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <typename T>
void im2col(const T* x, int channels, int h, int w, int k, int stride, int pad, int ho, int wo,
            T* cols) {
  const int p = ho * wo;
  for (int c = 0; c < channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* row = cols + static_cast<std::size_t>((c * k + ky) * k + kx) * p;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * stride - pad + ky;
          T* dst = row + static_cast<std::size_t>(oy) * wo;
          if (iy < 0 || iy >= h) {
            std::fill(dst, dst + wo, T(0));
            continue;
          }
          const T* src = x + (static_cast<std::size_t>(c) * h + iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * stride - pad + kx;
            dst[ox] = (ix >= 0 && ix < w) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* cols, int channels, int h, int w, int k, int stride, int pad, int ho,
                int wo, T* x) {
  const int p = ho * wo;
  for (int c = 0; c < channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* row = cols + static_cast<std::size_t>((c * k + ky) * k + kx) * p;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= h) continue;
          const T* src = row + static_cast<std::size_t>(oy) * wo;
          T* dst = x + (static_cast<std::size_t>(c) * h + iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < w) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

double log_sigmoid(double x) { return -softplus(-x); }

template <typename T>
void Var<T>::backward() const {
  if (node_->value.numel() != 1) {
    throw ShapeError("backward() needs a single-element output, got " + node_->value.shape().str());
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> seen;
  std::vector<std::pair<Node<T>*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, i] = stack.back();
    if (i < n->parents.size()) {
      Node<T>* p = n->parents[i++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* n = *it;
    if (!n->backward_fn) continue;
    if (!n->grad.empty()) n->backward_fn(*n);
    // Interior gradients are consumed; only leaves keep theirs.
    n->grad = Tensor<T>();
  }
}

template <typename T>
Var<T> conv2d(const Var<T>& x, const Var<T>& weight, const Var<T>& bias, int stride, int pad) {
  const Shape xs = x.shape();
  const Shape ws = weight.shape();
  require(ws.h == ws.w, "conv2d: kernel must be square");
  require(ws.c == xs.c, "conv2d: weight expects " + std::to_string(ws.c) + " input channels, got " +
                            std::to_string(xs.c));
  const int k = ws.h;
  const int cout = ws.n;
  const int ho = (xs.h + 2 * pad - k) / stride + 1;
  const int wo = (xs.w + 2 * pad - k) / stride + 1;
  require(ho >= 1 && wo >= 1, "conv2d: input " + xs.str() + " too small for kernel");
  if (bias.defined()) require(bias.value().numel() == static_cast<std::size_t>(cout), "conv2d: bias size");

  const int kk = xs.c * k * k;
  const int p = ho * wo;
  const bool pointwise = (k == 1 && stride == 1 && pad == 0);
  Tensor<T> out(Shape{xs.n, cout, ho, wo});
  std::vector<T> cols(pointwise ? 0 : static_cast<std::size_t>(kk) * p);
  ConstMapMat<T> wm(weight.value().data(), cout, kk);
  for (int n = 0; n < xs.n; ++n) {
    const T* xn = x.value().data() + static_cast<std::size_t>(n) * xs.c * xs.plane();
    if (!pointwise) im2col(xn, xs.c, xs.h, xs.w, k, stride, pad, ho, wo, cols.data());
    ConstMapMat<T> cm(pointwise ? xn : cols.data(), kk, p);
    MapMat<T> om(out.data() + static_cast<std::size_t>(n) * cout * p, cout, p);
    om.noalias() = wm * cm;
    if (bias.defined()) {
      for (int o = 0; o < cout; ++o) om.row(o).array() += bias.value()[o];
    }
  }

  return make_op<T>(std::move(out), {x, weight, bias}, [=](Node<T>& self) {
    const auto& xn_ = self.parents[0];
    const auto& wn_ = self.parents[1];
    const std::shared_ptr<Node<T>> bn_ = self.parents.size() > 2 ? self.parents[2] : nullptr;
    const Tensor<T>& g = self.grad;
    std::vector<T> buf(pointwise ? 0 : static_cast<std::size_t>(kk) * p);
    ConstMapMat<T> wm_(wn_->value.data(), cout, kk);
    for (int n = 0; n < xs.n; ++n) {
      ConstMapMat<T> gm(g.data() + static_cast<std::size_t>(n) * cout * p, cout, p);
      const T* xd = xn_->value.data() + static_cast<std::size_t>(n) * xs.c * xs.plane();
      if (wants(wn_)) {
        if (!pointwise) im2col(xd, xs.c, xs.h, xs.w, k, stride, pad, ho, wo, buf.data());
        ConstMapMat<T> cm(pointwise ? xd : buf.data(), kk, p);
        MapMat<T> dw(wn_->ensure_grad().data(), cout, kk);
        dw.noalias() += gm * cm.transpose();
      }
      if (wants(bn_)) {
        T* db = bn_->ensure_grad().data();
        for (int o = 0; o < cout; ++o) db[o] += gm.row(o).sum();
      }
      if (wants(xn_)) {
        T* dx = xn_->ensure_grad().data() + static_cast<std::size_t>(n) * xs.c * xs.plane();
        if (pointwise) {
          MapMat<T> dxm(dx, kk, p);
          dxm.noalias() += wm_.transpose() * gm;
        } else {
          MapMat<T> dcols(buf.data(), kk, p);
          dcols.noalias() = wm_.transpose() * gm;
          col2im_add(buf.data(), xs.c, xs.h, xs.w, k, stride, pad, ho, wo, dx);
        }
      }
    }
  });
}

template <typename T>
Var<T> instance_norm(const Var<T>& x, T eps) {
  const Shape s = x.shape();
  const std::size_t plane = s.plane();
  Tensor<T> out(s);
  std::vector<T> inv_std(static_cast<std::size_t>(s.n) * s.c);
  for (std::size_t nc = 0; nc < inv_std.size(); ++nc) {
    const T* src = x.value().data() + nc * plane;
    T* dst = out.data() + nc * plane;
    double mean = 0.0;
    for (std::size_t i = 0; i < plane; ++i) mean += src[i];
    mean /= static_cast<double>(plane);
    double var = 0.0;
    for (std::size_t i = 0; i < plane; ++i) var += (src[i] - mean) * (src[i] - mean);
    var /= static_cast<double>(plane);
    const double is = 1.0 / std::sqrt(var + static_cast<double>(eps));
    inv_std[nc] = static_cast<T>(is);
    for (std::size_t i = 0; i < plane; ++i) dst[i] = static_cast<T>((src[i] - mean) * is);
  }
  return make_op<T>(std::move(out), {x}, [inv_std = std::move(inv_std), plane](Node<T>& self) {
    const auto& in = self.parents[0];
    T* dx = in->ensure_grad().data();
    const T* g = self.grad.data();
    const T* xhat = self.value.data();
    for (std::size_t nc = 0; nc < inv_std.size(); ++nc) {
      const std::size_t o = nc * plane;
      double mg = 0.0, mgx = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        mg += g[o + i];
        mgx += static_cast<double>(g[o + i]) * xhat[o + i];
      }
      mg /= static_cast<double>(plane);
      mgx /= static_cast<double>(plane);
      for (std::size_t i = 0; i < plane; ++i) {
        dx[o + i] += static_cast<T>(inv_std[nc] * (g[o + i] - mg - xhat[o + i] * mgx));
      }
    }
  });
}

template <typename T>
Var<T> leaky_relu(const Var<T>& x, T slope) {
  Tensor<T> out(x.shape());
  const T* src = x.value().data();
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = src[i] > T(0) ? src[i] : slope * src[i];
  return make_op<T>(std::move(out), {x}, [slope](Node<T>& self) {
    const auto& in = self.parents[0];
    T* dx = in->ensure_grad().data();
    const T* xv = in->value.data();
    for (std::size_t i = 0; i < self.grad.numel(); ++i) {
      dx[i] += xv[i] > T(0) ? self.grad[i] : slope * self.grad[i];
    }
  });
}

template <typename T>
Var<T> sigmoid(const Var<T>& x) {
  Tensor<T> out(x.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = static_cast<T>(stable_sigmoid(x.value()[i]));
  return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
    T* dx = self.parents[0]->ensure_grad().data();
    for (std::size_t i = 0; i < self.grad.numel(); ++i) {
      const T s = self.value[i];
      dx[i] += self.grad[i] * s * (T(1) - s);
    }
  });
}

template <typename T>
Var<T> upsample2x(const Var<T>& x) {
  const Shape s = x.shape();
  const Shape os{s.n, s.c, s.h * 2, s.w * 2};
  Tensor<T> out(os);
  for (int nc = 0; nc < s.n * s.c; ++nc) {
    const T* src = x.value().data() + static_cast<std::size_t>(nc) * s.plane();
    T* dst = out.data() + static_cast<std::size_t>(nc) * os.plane();
    for (int y = 0; y < os.h; ++y) {
      for (int xx = 0; xx < os.w; ++xx) dst[y * os.w + xx] = src[(y / 2) * s.w + xx / 2];
    }
  }
  return make_op<T>(std::move(out), {x}, [s, os](Node<T>& self) {
    T* dx = self.parents[0]->ensure_grad().data();
    for (int nc = 0; nc < s.n * s.c; ++nc) {
      const T* g = self.grad.data() + static_cast<std::size_t>(nc) * os.plane();
      T* d = dx + static_cast<std::size_t>(nc) * s.plane();
      for (int y = 0; y < os.h; ++y) {
        for (int xx = 0; xx < os.w; ++xx) d[(y / 2) * s.w + xx / 2] += g[y * os.w + xx];
      }
    }
  });
}

template <typename T>
Var<T> concat_channels(const Var<T>& a, const Var<T>& b) {
  const Shape sa = a.shape();
  const Shape sb = b.shape();
  require(sa.n == sb.n && sa.h == sb.h && sa.w == sb.w,
          "concat_channels: " + sa.str() + " vs " + sb.str());
  const Shape os{sa.n, sa.c + sb.c, sa.h, sa.w};
  const std::size_t na = static_cast<std::size_t>(sa.c) * sa.plane();
  const std::size_t nb = static_cast<std::size_t>(sb.c) * sb.plane();
  Tensor<T> out(os);
  for (int n = 0; n < sa.n; ++n) {
    std::copy_n(a.value().data() + n * na, na, out.data() + n * (na + nb));
    std::copy_n(b.value().data() + n * nb, nb, out.data() + n * (na + nb) + na);
  }
  return make_op<T>(std::move(out), {a, b}, [=](Node<T>& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    for (int n = 0; n < sa.n; ++n) {
      const T* g = self.grad.data() + n * (na + nb);
      if (wants(pa)) {
        T* d = pa->ensure_grad().data() + n * na;
        for (std::size_t i = 0; i < na; ++i) d[i] += g[i];
      }
      if (wants(pb)) {
        T* d = pb->ensure_grad().data() + n * nb;
        for (std::size_t i = 0; i < nb; ++i) d[i] += g[na + i];
      }
    }
  });
}

template <typename T>
Var<T> slice_channels(const Var<T>& x, int begin, int count) {
  const Shape s = x.shape();
  require(begin >= 0 && count >= 1 && begin + count <= s.c, "slice_channels out of range");
  const Shape os{s.n, count, s.h, s.w};
  const std::size_t chunk = static_cast<std::size_t>(count) * s.plane();
  const std::size_t skip = static_cast<std::size_t>(begin) * s.plane();
  const std::size_t stride = static_cast<std::size_t>(s.c) * s.plane();
  Tensor<T> out(os);
  for (int n = 0; n < s.n; ++n) {
    std::copy_n(x.value().data() + n * stride + skip, chunk, out.data() + n * chunk);
  }
  return make_op<T>(std::move(out), {x}, [=](Node<T>& self) {
    T* dx = self.parents[0]->ensure_grad().data();
    for (int n = 0; n < s.n; ++n) {
      for (std::size_t i = 0; i < chunk; ++i) dx[n * stride + skip + i] += self.grad[n * chunk + i];
    }
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  require(a.shape() == b.shape(), "add: " + a.shape().str() + " vs " + b.shape().str());
  Tensor<T> out(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a.value()[i] + b.value()[i];
  return make_op<T>(std::move(out), {a, b}, [](Node<T>& self) {
    for (const auto& p : self.parents) {
      if (!wants(p)) continue;
      T* d = p->ensure_grad().data();
      for (std::size_t i = 0; i < self.grad.numel(); ++i) d[i] += self.grad[i];
    }
  });
}

template <typename T>
Var<T> channel_mix(const Var<T>& x, const std::vector<double>& mix, int out_channels) {
  const Shape s = x.shape();
  require(mix.size() == static_cast<std::size_t>(out_channels) * s.c,
          "channel_mix: matrix is not " + std::to_string(out_channels) + "x" + std::to_string(s.c));
  const Shape os{s.n, out_channels, s.h, s.w};
  const std::size_t plane = s.plane();
  Tensor<T> out(os);
  for (int n = 0; n < s.n; ++n) {
    for (int o = 0; o < out_channels; ++o) {
      T* dst = out.data() + (static_cast<std::size_t>(n) * out_channels + o) * plane;
      for (int i = 0; i < s.c; ++i) {
        const double m = mix[static_cast<std::size_t>(o) * s.c + i];
        if (m == 0.0) continue;
        const T* src = x.value().data() + (static_cast<std::size_t>(n) * s.c + i) * plane;
        for (std::size_t p = 0; p < plane; ++p) dst[p] += static_cast<T>(m * src[p]);
      }
    }
  }
  return make_op<T>(std::move(out), {x}, [=](Node<T>& self) {
    T* dx = self.parents[0]->ensure_grad().data();
    for (int n = 0; n < s.n; ++n) {
      for (int o = 0; o < out_channels; ++o) {
        const T* g = self.grad.data() + (static_cast<std::size_t>(n) * out_channels + o) * plane;
        for (int i = 0; i < s.c; ++i) {
          const double m = mix[static_cast<std::size_t>(o) * s.c + i];
          if (m == 0.0) continue;
          T* d = dx + (static_cast<std::size_t>(n) * s.c + i) * plane;
          for (std::size_t p = 0; p < plane; ++p) d[p] += static_cast<T>(m * g[p]);
        }
      }
    }
  });
}

template <typename T>
Var<T> global_avg_pool(const Var<T>& x) {
  const Shape s = x.shape();
  const std::size_t plane = s.plane();
  Tensor<T> out(Shape{s.n, s.c, 1, 1});
  for (std::size_t nc = 0; nc < out.numel(); ++nc) {
    double acc = 0.0;
    for (std::size_t p = 0; p < plane; ++p) acc += x.value()[nc * plane + p];
    out[nc] = static_cast<T>(acc / static_cast<double>(plane));
  }
  return make_op<T>(std::move(out), {x}, [plane](Node<T>& self) {
    T* dx = self.parents[0]->ensure_grad().data();
    for (std::size_t nc = 0; nc < self.grad.numel(); ++nc) {
      const T g = self.grad[nc] / static_cast<T>(plane);
      for (std::size_t p = 0; p < plane; ++p) dx[nc * plane + p] += g;
    }
  });
}

template <typename T>
Var<T> mse(const Var<T>& a, const Var<T>& b) {
  require(a.shape() == b.shape(), "mse: " + a.shape().str() + " vs " + b.shape().str());
  const std::size_t count = a.value().numel();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = static_cast<double>(a.value()[i]) - b.value()[i];
    acc += d * d;
  }
  return make_op<T>(scalar_tensor<T>(acc / count), {a, b}, [count](Node<T>& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    const double k = 2.0 * self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double d = k * (static_cast<double>(pa->value[i]) - pb->value[i]);
      if (wants(pa)) pa->ensure_grad()[i] += static_cast<T>(d);
      if (wants(pb)) pb->ensure_grad()[i] -= static_cast<T>(d);
    }
  });
}

template <typename T>
Var<T> l1(const Var<T>& a, const Var<T>& b) {
  require(a.shape() == b.shape(), "l1: " + a.shape().str() + " vs " + b.shape().str());
  const std::size_t count = a.value().numel();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += std::abs(static_cast<double>(a.value()[i]) - b.value()[i]);
  return make_op<T>(scalar_tensor<T>(acc / count), {a, b}, [count](Node<T>& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    const double k = self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double d = static_cast<double>(pa->value[i]) - pb->value[i];
      const double s = d > 0.0 ? k : (d < 0.0 ? -k : 0.0);
      if (wants(pa)) pa->ensure_grad()[i] += static_cast<T>(s);
      if (wants(pb)) pb->ensure_grad()[i] -= static_cast<T>(s);
    }
  });
}

template <typename T>
Var<T> mean_log_sigmoid(const Var<T>& x) {
  const std::size_t count = x.value().numel();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += log_sigmoid(x.value()[i]);
  return make_op<T>(scalar_tensor<T>(acc / count), {x}, [count](Node<T>& self) {
    const auto& in = self.parents[0];
    T* dx = in->ensure_grad().data();
    const double k = self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) dx[i] += static_cast<T>(k * stable_sigmoid(-in->value[i]));
  });
}

template <typename T>
Var<T> mean_log1m_sigmoid(const Var<T>& x) {
  const std::size_t count = x.value().numel();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += log_sigmoid(-static_cast<double>(x.value()[i]));
  return make_op<T>(scalar_tensor<T>(acc / count), {x}, [count](Node<T>& self) {
    const auto& in = self.parents[0];
    T* dx = in->ensure_grad().data();
    const double k = self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) dx[i] -= static_cast<T>(k * stable_sigmoid(in->value[i]));
  });
}

template <typename T>
Var<T> bce_with_logits(const Var<T>& logits, T label) {
  const std::size_t count = logits.value().numel();
  const double t = label;
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = logits.value()[i];
    acc += softplus(z) - t * z;
  }
  return make_op<T>(scalar_tensor<T>(acc / count), {logits}, [count, t](Node<T>& self) {
    const auto& in = self.parents[0];
    T* dx = in->ensure_grad().data();
    const double k = self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) dx[i] += static_cast<T>(k * (stable_sigmoid(in->value[i]) - t));
  });
}

template <typename T>
Var<T> weighted_sum(const std::vector<Var<T>>& terms, const std::vector<T>& weights) {
  require(terms.size() == weights.size() && !terms.empty(), "weighted_sum: size mismatch");
  double acc = 0.0;
  auto node = std::make_shared<Node<T>>();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require(terms[i].value().numel() == 1, "weighted_sum expects scalar terms");
    acc += static_cast<double>(weights[i]) * terms[i].item();
    if (terms[i].requires_grad()) node->requires_grad = true;
  }
  node->value = scalar_tensor<T>(acc);
  if (node->requires_grad) {
    for (const auto& t : terms) node->parents.push_back(t.node());
    node->backward_fn = [weights](Node<T>& self) {
      for (std::size_t i = 0; i < self.parents.size(); ++i) {
        if (wants(self.parents[i])) self.parents[i]->ensure_grad()[0] += weights[i] * self.grad[0];
      }
    };
  }
  return Var<T>(std::move(node));
}

#define SKYGAN_INSTANTIATE(T)                                                                     \
  template class Var<T>;                                                                          \
  template Var<T> conv2d<T>(const Var<T>&, const Var<T>&, const Var<T>&, int, int);               \
  template Var<T> instance_norm<T>(const Var<T>&, T);                                             \
  template Var<T> leaky_relu<T>(const Var<T>&, T);                                                \
  template Var<T> sigmoid<T>(const Var<T>&);                                                      \
  template Var<T> upsample2x<T>(const Var<T>&);                                                   \
  template Var<T> concat_channels<T>(const Var<T>&, const Var<T>&);                               \
  template Var<T> slice_channels<T>(const Var<T>&, int, int);                                     \
  template Var<T> add<T>(const Var<T>&, const Var<T>&);                                           \
  template Var<T> channel_mix<T>(const Var<T>&, const std::vector<double>&, int);                 \
  template Var<T> global_avg_pool<T>(const Var<T>&);                                              \
  template Var<T> mse<T>(const Var<T>&, const Var<T>&);                                           \
  template Var<T> l1<T>(const Var<T>&, const Var<T>&);                                            \
  template Var<T> mean_log_sigmoid<T>(const Var<T>&);                                             \
  template Var<T> mean_log1m_sigmoid<T>(const Var<T>&);                                           \
  template Var<T> bce_with_logits<T>(const Var<T>&, T);                                           \
  template Var<T> weighted_sum<T>(const std::vector<Var<T>>&, const std::vector<T>&);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::nn
