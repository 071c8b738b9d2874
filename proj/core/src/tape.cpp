// Copyright 2026 The ReST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rest/tape.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rest/errors.hpp"

namespace rest {

namespace {

double stable_sigmoid(double x) {
  double y;
  if (x >= 0.0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::clamp(y, kSigmoidFloor, 1.0 - kSigmoidFloor);
}

}  // namespace

Tape::ValueId Tape::push(Tensor value, BackFn back) {
  nodes_.push_back(Node{std::move(value), Tensor(), std::move(back)});
  return ValueId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tensor& Tape::grad_of(std::uint32_t index) {
  Node& n = nodes_[index];
  if (n.grad.empty()) {
    n.grad = Tensor(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

void Tape::add_grad(std::uint32_t index, const Tensor& g) {
  Tensor& dst = grad_of(index);
  double* d = dst.data();
  const double* s = g.data();
  for (std::size_t i = 0; i < dst.numel(); ++i) d[i] += s[i];
}

Tape::ValueId Tape::constant(Tensor t) { return push(std::move(t), {}); }

Tape::ValueId Tape::param(Parameter& p) {
  return push(p.value, [&p](Tape&, std::uint32_t, const Tensor& g) {
    double* d = p.grad.data();
    const double* s = g.data();
    for (std::size_t i = 0; i < p.grad.numel(); ++i) d[i] += s[i];
  });
}

Tape::ValueId Tape::lookup(Parameter& table, std::vector<std::uint32_t> ids) {
  const std::size_t vocab = table.value.rows();
  const std::size_t d = table.value.cols();
  for (std::uint32_t id : ids) {
    if (id >= vocab) {
      throw IndexError("lookup: id " + std::to_string(id) +
                       " out of vocabulary (size " + std::to_string(vocab) +
                       ") for table " + table.name);
    }
  }
  Tensor out(ids.size(), d);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    auto src = table.value.row_span(ids[r]);
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  return push(std::move(out),
              [&table, ids = std::move(ids)](Tape&, std::uint32_t, const Tensor& g) {
                for (std::size_t r = 0; r < ids.size(); ++r) {
                  auto dst = table.grad.row_span(ids[r]);
                  auto src = g.row_span(r);
                  for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
                }
              });
}

Tape::ValueId Tape::affine(ValueId x, Parameter& w, Parameter& b) {
  const Tensor& xv = value(x);
  if (xv.cols() != w.value.rows()) {
    throw DimensionError("affine: input " + xv.shape_str() + " vs weight " +
                         w.value.shape_str() + " (" + w.name + ")");
  }
  if (b.value.rows() != 1 || b.value.cols() != w.value.cols()) {
    throw DimensionError("affine: bias " + b.value.shape_str() + " (" + b.name +
                         ") vs weight " + w.value.shape_str());
  }
  const std::size_t m = xv.rows(), p = xv.cols(), q = w.value.cols();
  Tensor out(m, q);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < q; ++j) out.at(i, j) = b.value.at(0, j);
    for (std::size_t k = 0; k < p; ++k) {
      const double xik = xv.at(i, k);
      if (xik == 0.0) continue;
      for (std::size_t j = 0; j < q; ++j) out.at(i, j) += xik * w.value.at(k, j);
    }
  }
  return push(std::move(out),
              [xi = x.index, &w, &b](Tape& t, std::uint32_t, const Tensor& g) {
                const Tensor& xv = t.nodes_[xi].value;
                const std::size_t m = xv.rows(), p = xv.cols(), q = w.value.cols();
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < m; ++i) {
                  for (std::size_t k = 0; k < p; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < q; ++j)
                      acc += g.at(i, j) * w.value.at(k, j);
                    dx.at(i, k) += acc;
                  }
                  for (std::size_t k = 0; k < p; ++k) {
                    const double xik = xv.at(i, k);
                    if (xik == 0.0) continue;
                    for (std::size_t j = 0; j < q; ++j)
                      w.grad.at(k, j) += xik * g.at(i, j);
                  }
                  for (std::size_t j = 0; j < q; ++j) b.grad.at(0, j) += g.at(i, j);
                }
              });
}

Tape::ValueId Tape::matmul(ValueId a, ValueId b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.cols() != bv.rows()) {
    throw DimensionError("matmul: " + av.shape_str() + " vs " + bv.shape_str());
  }
  const std::size_t m = av.rows(), p = av.cols(), q = bv.cols();
  Tensor out(m, q);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < p; ++k) {
      const double aik = av.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < q; ++j) out.at(i, j) += aik * bv.at(k, j);
    }
  return push(std::move(out),
              [ai = a.index, bi = b.index](Tape& t, std::uint32_t, const Tensor& g) {
                const Tensor& av = t.nodes_[ai].value;
                const Tensor& bv = t.nodes_[bi].value;
                const std::size_t m = av.rows(), p = av.cols(), q = bv.cols();
                Tensor& da = t.grad_of(ai);
                Tensor& db = t.grad_of(bi);
                for (std::size_t i = 0; i < m; ++i)
                  for (std::size_t k = 0; k < p; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < q; ++j)
                      acc += g.at(i, j) * bv.at(k, j);
                    da.at(i, k) += acc;
                  }
                for (std::size_t k = 0; k < p; ++k)
                  for (std::size_t i = 0; i < m; ++i) {
                    const double aik = av.at(i, k);
                    if (aik == 0.0) continue;
                    for (std::size_t j = 0; j < q; ++j)
                      db.at(k, j) += aik * g.at(i, j);
                  }
              });
}

Tape::ValueId Tape::transpose(ValueId x) {
  const Tensor& xv = value(x);
  Tensor out(xv.cols(), xv.rows());
  for (std::size_t i = 0; i < xv.rows(); ++i)
    for (std::size_t j = 0; j < xv.cols(); ++j) out.at(j, i) = xv.at(i, j);
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < g.rows(); ++i)
                  for (std::size_t j = 0; j < g.cols(); ++j)
                    dx.at(j, i) += g.at(i, j);
              });
}

Tape::ValueId Tape::sigmoid(ValueId x) {
  const Tensor& xv = value(x);
  Tensor out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.numel(); ++i)
    out.values()[i] = stable_sigmoid(xv.values()[i]);
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t self, const Tensor& g) {
                const Tensor& y = t.nodes_[self].value;
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < y.numel(); ++i) {
                  const double yi = y.values()[i];
                  dx.values()[i] += g.values()[i] * yi * (1.0 - yi);
                }
              });
}

Tape::ValueId Tape::relu(ValueId x) {
  const Tensor& xv = value(x);
  Tensor out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.numel(); ++i)
    out.values()[i] = std::max(0.0, xv.values()[i]);
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t, const Tensor& g) {
                const Tensor& xv = t.nodes_[xi].value;
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < xv.numel(); ++i)
                  if (xv.values()[i] > 0.0) dx.values()[i] += g.values()[i];
              });
}

Tape::ValueId Tape::softmax_rows(ValueId x) {
  const Tensor& xv = value(x);
  Tensor out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.rows(); ++i) {
    auto src = xv.row_span(i);
    auto dst = out.row_span(i);
    const double mx = *std::max_element(src.begin(), src.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < src.size(); ++j) {
      dst[j] = std::exp(src[j] - mx);
      sum += dst[j];
    }
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] /= sum;
  }
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t self, const Tensor& g) {
                const Tensor& y = t.nodes_[self].value;
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < y.rows(); ++i) {
                  double dot = 0.0;
                  for (std::size_t j = 0; j < y.cols(); ++j)
                    dot += g.at(i, j) * y.at(i, j);
                  for (std::size_t j = 0; j < y.cols(); ++j)
                    dx.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
                }
              });
}

Tape::ValueId Tape::add(ValueId a, ValueId b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  check_same_shape(av, bv, "add");
  Tensor out = av;
  for (std::size_t i = 0; i < out.numel(); ++i) out.values()[i] += bv.values()[i];
  return push(std::move(out),
              [ai = a.index, bi = b.index](Tape& t, std::uint32_t, const Tensor& g) {
                t.add_grad(ai, g);
                t.add_grad(bi, g);
              });
}

Tape::ValueId Tape::sub(ValueId a, ValueId b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  check_same_shape(av, bv, "sub");
  Tensor out = av;
  for (std::size_t i = 0; i < out.numel(); ++i) out.values()[i] -= bv.values()[i];
  return push(std::move(out),
              [ai = a.index, bi = b.index](Tape& t, std::uint32_t, const Tensor& g) {
                t.add_grad(ai, g);
                Tensor& db = t.grad_of(bi);
                for (std::size_t i = 0; i < db.numel(); ++i)
                  db.values()[i] -= g.values()[i];
              });
}

Tape::ValueId Tape::mul(ValueId a, ValueId b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  check_same_shape(av, bv, "mul");
  Tensor out = av;
  for (std::size_t i = 0; i < out.numel(); ++i) out.values()[i] *= bv.values()[i];
  return push(std::move(out),
              [ai = a.index, bi = b.index](Tape& t, std::uint32_t, const Tensor& g) {
                const Tensor& av = t.nodes_[ai].value;
                const Tensor& bv = t.nodes_[bi].value;
                Tensor& da = t.grad_of(ai);
                Tensor& db = t.grad_of(bi);
                for (std::size_t i = 0; i < g.numel(); ++i) {
                  da.values()[i] += g.values()[i] * bv.values()[i];
                  db.values()[i] += g.values()[i] * av.values()[i];
                }
              });
}

Tape::ValueId Tape::scale(ValueId x, double c) {
  Tensor out = value(x);
  for (double& v : out.values()) v *= c;
  return push(std::move(out),
              [xi = x.index, c](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < dx.numel(); ++i)
                  dx.values()[i] += c * g.values()[i];
              });
}

Tape::ValueId Tape::concat_cols(std::span<const ValueId> parts) {
  if (parts.empty()) throw ContractError("concat_cols: no inputs");
  const std::size_t m = value(parts[0]).rows();
  std::size_t total = 0;
  for (ValueId p : parts) {
    if (value(p).rows() != m) {
      throw DimensionError("concat_cols: row mismatch " +
                           value(parts[0]).shape_str() + " vs " +
                           value(p).shape_str());
    }
    total += value(p).cols();
  }
  Tensor out(m, total);
  std::size_t off = 0;
  for (ValueId p : parts) {
    const Tensor& pv = value(p);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < pv.cols(); ++j)
        out.at(i, off + j) = pv.at(i, j);
    off += pv.cols();
  }
  std::vector<std::uint32_t> idx(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) idx[i] = parts[i].index;
  return push(std::move(out),
              [idx = std::move(idx)](Tape& t, std::uint32_t, const Tensor& g) {
                std::size_t off = 0;
                for (std::uint32_t xi : idx) {
                  Tensor& dx = t.grad_of(xi);
                  for (std::size_t i = 0; i < dx.rows(); ++i)
                    for (std::size_t j = 0; j < dx.cols(); ++j)
                      dx.at(i, j) += g.at(i, off + j);
                  off += dx.cols();
                }
              });
}

Tape::ValueId Tape::concat_rows(std::span<const ValueId> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no inputs");
  const std::size_t c = value(parts[0]).cols();
  std::size_t total = 0;
  for (ValueId p : parts) {
    if (value(p).cols() != c) {
      throw DimensionError("concat_rows: column mismatch " +
                           value(parts[0]).shape_str() + " vs " +
                           value(p).shape_str());
    }
    total += value(p).rows();
  }
  Tensor out(total, c);
  std::size_t off = 0;
  for (ValueId p : parts) {
    const Tensor& pv = value(p);
    for (std::size_t i = 0; i < pv.rows(); ++i) {
      auto src = pv.row_span(i);
      std::copy(src.begin(), src.end(), out.row_span(off + i).begin());
    }
    off += pv.rows();
  }
  std::vector<std::uint32_t> idx(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) idx[i] = parts[i].index;
  return push(std::move(out),
              [idx = std::move(idx)](Tape& t, std::uint32_t, const Tensor& g) {
                std::size_t off = 0;
                for (std::uint32_t xi : idx) {
                  Tensor& dx = t.grad_of(xi);
                  for (std::size_t i = 0; i < dx.rows(); ++i)
                    for (std::size_t j = 0; j < dx.cols(); ++j)
                      dx.at(i, j) += g.at(off + i, j);
                  off += dx.rows();
                }
              });
}

Tape::ValueId Tape::slice_cols(ValueId x, std::size_t first, std::size_t count) {
  const Tensor& xv = value(x);
  if (first + count > xv.cols()) {
    throw ContractError("slice_cols: [" + std::to_string(first) + ", " +
                        std::to_string(first + count) + ") out of " +
                        xv.shape_str());
  }
  Tensor out(xv.rows(), count);
  for (std::size_t i = 0; i < xv.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out.at(i, j) = xv.at(i, first + j);
  return push(std::move(out),
              [xi = x.index, first](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < g.rows(); ++i)
                  for (std::size_t j = 0; j < g.cols(); ++j)
                    dx.at(i, first + j) += g.at(i, j);
              });
}

Tape::ValueId Tape::slice_rows(ValueId x, std::size_t first, std::size_t count) {
  const Tensor& xv = value(x);
  if (first + count > xv.rows()) {
    throw ContractError("slice_rows: [" + std::to_string(first) + ", " +
                        std::to_string(first + count) + ") out of " +
                        xv.shape_str());
  }
  Tensor out(count, xv.cols());
  for (std::size_t i = 0; i < count; ++i) {
    auto src = xv.row_span(first + i);
    std::copy(src.begin(), src.end(), out.row_span(i).begin());
  }
  return push(std::move(out),
              [xi = x.index, first](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < g.rows(); ++i)
                  for (std::size_t j = 0; j < g.cols(); ++j)
                    dx.at(first + i, j) += g.at(i, j);
              });
}

Tape::ValueId Tape::broadcast_rows(ValueId x, std::size_t n) {
  const Tensor& xv = value(x);
  if (xv.rows() != 1) {
    throw DimensionError("broadcast_rows: expected 1-row input, got " +
                         xv.shape_str());
  }
  Tensor out(n, xv.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto src = xv.row_span(0);
    std::copy(src.begin(), src.end(), out.row_span(i).begin());
  }
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < g.rows(); ++i)
                  for (std::size_t j = 0; j < g.cols(); ++j)
                    dx.at(0, j) += g.at(i, j);
              });
}

Tape::ValueId Tape::repeat_cols(ValueId x, std::size_t times) {
  const Tensor& xv = value(x);
  if (times == 0) throw ContractError("repeat_cols: times == 0");
  Tensor out(xv.rows(), xv.cols() * times);
  for (std::size_t i = 0; i < xv.rows(); ++i)
    for (std::size_t j = 0; j < xv.cols(); ++j)
      for (std::size_t u = 0; u < times; ++u)
        out.at(i, j * times + u) = xv.at(i, j);
  return push(std::move(out),
              [xi = x.index, times](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < dx.rows(); ++i)
                  for (std::size_t j = 0; j < dx.cols(); ++j) {
                    double acc = 0.0;
                    for (std::size_t u = 0; u < times; ++u)
                      acc += g.at(i, j * times + u);
                    dx.at(i, j) += acc;
                  }
              });
}

Tape::ValueId Tape::field_means(ValueId x, std::size_t fields) {
  const Tensor& xv = value(x);
  if (fields == 0 || xv.cols() % fields != 0) {
    throw DimensionError("field_means: " + xv.shape_str() +
                         " not divisible into " + std::to_string(fields) +
                         " fields");
  }
  const std::size_t w = xv.cols() / fields;
  Tensor out(xv.rows(), fields);
  for (std::size_t i = 0; i < xv.rows(); ++i)
    for (std::size_t f = 0; f < fields; ++f) {
      double acc = 0.0;
      for (std::size_t u = 0; u < w; ++u) acc += xv.at(i, f * w + u);
      out.at(i, f) = acc / static_cast<double>(w);
    }
  return push(std::move(out),
              [xi = x.index, fields, w](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                const double inv = 1.0 / static_cast<double>(w);
                for (std::size_t i = 0; i < dx.rows(); ++i)
                  for (std::size_t f = 0; f < fields; ++f)
                    for (std::size_t u = 0; u < w; ++u)
                      dx.at(i, f * w + u) += g.at(i, f) * inv;
              });
}

Tape::ValueId Tape::row_scale(ValueId x, std::vector<double> factors) {
  const Tensor& xv = value(x);
  if (factors.size() != xv.rows()) {
    throw DimensionError("row_scale: " + std::to_string(factors.size()) +
                         " factors vs " + xv.shape_str());
  }
  Tensor out = xv;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out.at(i, j) *= factors[i];
  return push(std::move(out),
              [xi = x.index, factors = std::move(factors)](Tape& t, std::uint32_t,
                                                           const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < dx.rows(); ++i)
                  for (std::size_t j = 0; j < dx.cols(); ++j)
                    dx.at(i, j) += factors[i] * g.at(i, j);
              });
}

Tape::ValueId Tape::sum_all(ValueId x) {
  const Tensor& xv = value(x);
  double acc = 0.0;
  for (double v : xv.values()) acc += v;
  return push(Tensor::scalar(acc),
              [xi = x.index](Tape& t, std::uint32_t, const Tensor& g) {
                Tensor& dx = t.grad_of(xi);
                const double gv = g.values()[0];
                for (double& v : dx.values()) v += gv;
              });
}

Tape::ValueId Tape::logsumexp_rows(ValueId x) {
  const Tensor& xv = value(x);
  Tensor out(xv.rows(), 1);
  for (std::size_t i = 0; i < xv.rows(); ++i) {
    auto src = xv.row_span(i);
    const double mx = *std::max_element(src.begin(), src.end());
    double sum = 0.0;
    for (double v : src) sum += std::exp(v - mx);
    out.at(i, 0) = mx + std::log(sum);
  }
  return push(std::move(out),
              [xi = x.index](Tape& t, std::uint32_t self, const Tensor& g) {
                const Tensor& xv = t.nodes_[xi].value;
                const Tensor& lse = t.nodes_[self].value;
                Tensor& dx = t.grad_of(xi);
                for (std::size_t i = 0; i < xv.rows(); ++i)
                  for (std::size_t j = 0; j < xv.cols(); ++j)
                    dx.at(i, j) +=
                        g.at(i, 0) * std::exp(xv.at(i, j) - lse.at(i, 0));
              });
}

Tape::ValueId Tape::bce_mean(ValueId preds, std::vector<double> labels) {
  const Tensor& pv = value(preds);
  if (pv.cols() != 1 || pv.rows() != labels.size()) {
    throw DimensionError("bce_mean: predictions " + pv.shape_str() + " vs " +
                         std::to_string(labels.size()) + " labels");
  }
  const std::size_t m = labels.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = std::clamp(pv.at(i, 0), kProbClamp, 1.0 - kProbClamp);
    acc += labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
  }
  return push(Tensor::scalar(-acc / static_cast<double>(m)),
              [pi = preds.index, labels = std::move(labels)](Tape& t, std::uint32_t,
                                                             const Tensor& g) {
                const Tensor& pv = t.nodes_[pi].value;
                Tensor& dp = t.grad_of(pi);
                const double gv = g.values()[0];
                const double m = static_cast<double>(labels.size());
                for (std::size_t i = 0; i < labels.size(); ++i) {
                  const double p =
                      std::clamp(pv.at(i, 0), kProbClamp, 1.0 - kProbClamp);
                  dp.at(i, 0) += gv * (p - labels[i]) / (p * (1.0 - p) * m);
                }
              });
}

void Tape::backward(ValueId loss) {
  if (value(loss).numel() != 1) {
    throw ContractError("backward: loss has shape " + value(loss).shape_str() +
                        ", expected a scalar");
  }
  grad_of(loss.index).values()[0] = 1.0;
  for (std::uint32_t i = loss.index + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.grad.empty() && n.back) n.back(*this, i, n.grad);
  }
}

}  // namespace rest
