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

#include <cmath>

#include <doctest.h>

#include "rest/errors.hpp"
#include "rest/gradcheck.hpp"
#include "rest/model.hpp"
#include "rest/rng.hpp"

using namespace rest;

namespace {

ModelParams toy_params(std::uint32_t d = 4, std::uint64_t seed = 77) {
  ModelConfig cfg;
  cfg.embedding_dim = d;
  return ModelParams::init(/*n_users=*/6, /*n_items=*/10, /*n_brands=*/4,
                           /*n_categories=*/3, cfg, seed);
}

std::vector<double> row_of(const Tensor& t, std::size_t r) {
  auto s = t.row_span(r);
  return {s.begin(), s.end()};
}

// Straight-line SeNet from the definition: squeeze by field means, 2->1->2
// excitation with relu/sigmoid, fields scaled by 2*gate.
std::vector<double> senet_oracle(const ModelParams& mp,
                                 const std::vector<double>& eb,
                                 const std::vector<double>& ec) {
  const std::size_t d = eb.size();
  double zb = 0, zc = 0;
  for (double v : eb) zb += v;
  for (double v : ec) zc += v;
  zb /= static_cast<double>(d);
  zc /= static_cast<double>(d);
  const double h = std::max(
      0.0, zb * mp.senet_w1.value.at(0, 0) + zc * mp.senet_w1.value.at(1, 0) +
               mp.senet_b1.value.at(0, 0));
  auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  const double gb = sig(h * mp.senet_w2.value.at(0, 0) + mp.senet_b2.value.at(0, 0));
  const double gc = sig(h * mp.senet_w2.value.at(0, 1) + mp.senet_b2.value.at(0, 1));
  std::vector<double> out(2 * d);
  for (std::size_t i = 0; i < d; ++i) out[i] = eb[i] * 2.0 * gb;
  for (std::size_t i = 0; i < d; ++i) out[d + i] = ec[i] * 2.0 * gc;
  return out;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("senet at neutral gates equals plain concatenation") {
  ModelParams mp = toy_params();
  mp.senet_w2.value.fill(0.0);
  mp.senet_b2.value.fill(0.0);  // sigmoid(0) = 0.5, scale 2*0.5 = 1
  Tape t;
  const auto eb = t.lookup(mp.brand_table, {1});
  const auto ec = t.lookup(mp.category_table, {2});
  const auto f = senet_select(t, mp, eb, ec);
  for (std::size_t j = 0; j < mp.d; ++j) {
    CHECK(t.value(f).at(0, j) == t.value(eb).at(0, j));
    CHECK(t.value(f).at(0, mp.d + j) == t.value(ec).at(0, j));
  }
}

TEST_CASE("senet zeroes the brand field when the brand embedding is zero") {
  ModelParams mp = toy_params();
  for (std::size_t c = 0; c < mp.d; ++c) mp.brand_table.value.at(0, c) = 0.0;
  Tape t;
  const auto f = senet_select(t, mp, t.lookup(mp.brand_table, {0}),
                              t.lookup(mp.category_table, {1}));
  for (std::size_t j = 0; j < mp.d; ++j) CHECK(t.value(f).at(0, j) == 0.0);
}

TEST_CASE("senet matches a straight-line reimplementation") {
  ModelParams mp = toy_params(4, 123);
  Tape t;
  const auto eb = t.lookup(mp.brand_table, {3});
  const auto ec = t.lookup(mp.category_table, {0});
  const auto f = senet_select(t, mp, eb, ec);
  const auto want = senet_oracle(mp, row_of(mp.brand_table.value, 3),
                                 row_of(mp.category_table.value, 0));
  for (std::size_t j = 0; j < 2 * mp.d; ++j) {
    CHECK(std::abs(t.value(f).at(0, j) - want[j]) <= 1e-12);
  }
}

TEST_CASE("meta_inject: alpha 0 is the identity on the id embedding") {
  ModelParams mp = toy_params();
  Tape t;
  const auto e_i = t.lookup(mp.item_table, {5});
  const auto f = senet_select(t, mp, t.lookup(mp.brand_table, {1}),
                              t.lookup(mp.category_table, {1}));
  const auto warm = meta_inject(t, mp, f, e_i, {0.0});
  for (std::size_t j = 0; j < mp.d; ++j) {
    CHECK(t.value(warm).at(0, j) == t.value(e_i).at(0, j));
  }
}

TEST_CASE("meta_inject: zeroed MLP is the identity for any alpha") {
  ModelParams mp = toy_params();
  mp.inject_w1.value.fill(0.0);
  mp.inject_b1.value.fill(0.0);
  mp.inject_w2.value.fill(0.0);
  mp.inject_b2.value.fill(0.0);
  Tape t;
  const auto e_i = t.lookup(mp.item_table, {2});
  const auto f = senet_select(t, mp, t.lookup(mp.brand_table, {0}),
                              t.lookup(mp.category_table, {0}));
  const auto warm = meta_inject(t, mp, f, e_i, {0.73});
  for (std::size_t j = 0; j < mp.d; ++j) {
    CHECK(t.value(warm).at(0, j) == t.value(e_i).at(0, j));
  }
}

TEST_CASE("meta_inject: alpha 1 equals the unweighted injection") {
  ModelParams mp = toy_params(4, 88);
  Tape t;
  const auto e_i = t.lookup(mp.item_table, {7});
  const auto eb = t.lookup(mp.brand_table, {2});
  const auto ec = t.lookup(mp.category_table, {1});
  const auto f = senet_select(t, mp, eb, ec);
  const auto warm = meta_inject(t, mp, f, e_i, {1.0});
  // Unweighted path: MLP(F) + e_i assembled from primitive ops.
  const auto h = t.relu(t.affine(f, mp.inject_w1, mp.inject_b1));
  const auto m = t.affine(h, mp.inject_w2, mp.inject_b2);
  const auto want = t.add(m, e_i);
  for (std::size_t j = 0; j < mp.d; ++j) {
    CHECK(t.value(warm).at(0, j) == doctest::Approx(t.value(want).at(0, j)).epsilon(1e-15));
  }
}

TEST_CASE("user_interest: empty history is the zero vector") {
  ModelParams mp = toy_params();
  Tape t;
  const auto hist = t.constant(Tensor(0, mp.d));
  const auto v = user_interest(t, mp, hist, t.lookup(mp.item_table, {1}));
  for (std::size_t j = 0; j < mp.d; ++j) CHECK(t.value(v).at(0, j) == 0.0);
}

TEST_CASE("user_interest: zeroed attention head gives zero weights") {
  ModelParams mp = toy_params();
  mp.attn_w2.value.fill(0.0);
  mp.attn_b2.value.fill(0.0);
  Tape t;
  const auto hist = t.lookup(mp.item_table, {1});
  const auto v = user_interest(t, mp, hist, t.lookup(mp.item_table, {2}));
  for (std::size_t j = 0; j < mp.d; ++j) CHECK(t.value(v).at(0, j) == 0.0);
}

TEST_CASE("user_interest matches a naive loop oracle") {
  ModelParams mp = toy_params(4, 321);
  const std::vector<std::uint32_t> hist_ids = {1, 4, 9};
  const std::uint32_t target = 3;
  Tape t;
  const auto hist = t.lookup(mp.item_table, hist_ids);
  const auto v = user_interest(t, mp, hist, t.lookup(mp.item_table, {target}));

  // Oracle: per history row, features [vj, vt, vj-vt, vj*vt] -> 2-layer MLP
  // scalar weight; V = sum w_j vj.
  const std::size_t d = mp.d;
  std::vector<double> vt = row_of(mp.item_table.value, target);
  std::vector<double> acc(d, 0.0);
  for (std::uint32_t id : hist_ids) {
    std::vector<double> vj = row_of(mp.item_table.value, id);
    std::vector<double> x(4 * d);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = vj[j];
      x[d + j] = vt[j];
      x[2 * d + j] = vj[j] - vt[j];
      x[3 * d + j] = vj[j] * vt[j];
    }
    std::vector<double> h(2 * d);
    for (std::size_t o = 0; o < 2 * d; ++o) {
      double s = mp.attn_b1.value.at(0, o);
      for (std::size_t k = 0; k < 4 * d; ++k) s += x[k] * mp.attn_w1.value.at(k, o);
      h[o] = std::max(0.0, s);
    }
    double w = mp.attn_b2.value.at(0, 0);
    for (std::size_t k = 0; k < 2 * d; ++k) w += h[k] * mp.attn_w2.value.at(k, 0);
    for (std::size_t j = 0; j < d; ++j) acc[j] += w * vj[j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    CHECK(std::abs(t.value(v).at(0, j) - acc[j]) <= 1e-12);
  }
}

TEST_CASE("user_interest is exactly invariant for identical history rows") {
  ModelParams mp = toy_params(4, 11);
  Tape t;
  const auto a = user_interest(t, mp, t.lookup(mp.item_table, {6, 6, 6}),
                               t.lookup(mp.item_table, {2}));
  const auto b = user_interest(t, mp, t.lookup(mp.item_table, {6, 6, 6}),
                               t.lookup(mp.item_table, {2}));
  for (std::size_t j = 0; j < mp.d; ++j) {
    CHECK(t.value(a).at(0, j) == t.value(b).at(0, j));
  }
}

TEST_CASE("predict: zeroed tower gives one half; big bias saturates") {
  ModelParams mp = toy_params();
  for (Parameter* p : {&mp.tower_w1, &mp.tower_b1, &mp.tower_w2, &mp.tower_b2,
                       &mp.tower_w3, &mp.tower_b3}) {
    p->value.fill(0.0);
  }
  Tape t;
  const auto e = t.lookup(mp.item_table, {0});
  const auto p = predict(t, mp, e, e, e, e, e);
  CHECK(t.value(p).item() == 0.5);

  mp.tower_b3.value.at(0, 0) = 10.0;
  Tape t2;
  const auto e2 = t2.lookup(mp.item_table, {0});
  const auto p2 = predict(t2, mp, e2, e2, e2, e2, e2);
  CHECK(t2.value(p2).item() ==
        doctest::Approx(1.0 / (1.0 + std::exp(-10.0))).epsilon(1e-12));
}

TEST_CASE("predict stays strictly inside (0,1) and matches a forward oracle") {
  ModelParams mp = toy_params(4, 55);
  Rng rng(4);
  Tape t;
  const auto vu = t.lookup(mp.item_table, {1});
  const auto eu = t.lookup(mp.user_table, {3});
  const auto ew = t.lookup(mp.item_table, {2});
  const auto eb = t.lookup(mp.brand_table, {1});
  const auto ec = t.lookup(mp.category_table, {2});
  const auto p = predict(t, mp, vu, eu, ew, eb, ec);
  const double got = t.value(p).item();
  CHECK(got > 0.0);
  CHECK(got < 1.0);

  // straight-line tower
  std::vector<double> x;
  for (const Tensor* e : {&t.value(vu), &t.value(eu), &t.value(ew),
                          &t.value(eb), &t.value(ec)}) {
    for (std::size_t j = 0; j < e->cols(); ++j) x.push_back(e->at(0, j));
  }
  auto layer = [](const std::vector<double>& in, const Parameter& w,
                  const Parameter& b, bool relu_after) {
    std::vector<double> out(w.value.cols());
    for (std::size_t o = 0; o < out.size(); ++o) {
      double s = b.value.at(0, o);
      for (std::size_t k = 0; k < in.size(); ++k) s += in[k] * w.value.at(k, o);
      out[o] = relu_after ? std::max(0.0, s) : s;
    }
    return out;
  };
  const auto h1 = layer(x, mp.tower_w1, mp.tower_b1, true);
  const auto h2 = layer(h1, mp.tower_w2, mp.tower_b2, true);
  const auto logits = layer(h2, mp.tower_w3, mp.tower_b3, false);
  const double want = 1.0 / (1.0 + std::exp(-logits[0]));
  CHECK(std::abs(got - want) <= 1e-12);
  (void)rng;
}

TEST_CASE("full chain gradient check at d=4, |H|=2") {
  ModelParams mp = toy_params(4, 1234);
  Dataset ds;
  ds.catalog.brand_of = {0, 1, 2, 3, 0, 1, 2, 3, 0, 1};
  ds.catalog.category_of = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
  ds.catalog.n_brands = 4;
  ds.catalog.n_categories = 3;
  for (int i = 0; i < 10; ++i) ds.catalog.location_of.push_back(GeoPoint(10, 10));
  Rng rng(6);
  for (std::uint32_t r = 0; r < 4; ++r) {
    InteractionRecord rec;
    rec.user_id = r % 6;
    rec.request_id = r;
    rec.item_id = static_cast<std::uint32_t>(rng.uniform_int(10));
    rec.history = {static_cast<std::uint32_t>(rng.uniform_int(10)),
                   static_cast<std::uint32_t>(rng.uniform_int(10))};
    rec.user_location = GeoPoint(10, 10);
    rec.label = static_cast<int>(rng.uniform_int(2));
    ds.records.push_back(rec);
  }
  const std::vector<std::uint32_t> idx = {0, 1, 2, 3};
  const std::vector<double> alphas = {0.3, 0.9, 0.5, 0.1};
  std::vector<double> labels;
  for (const auto& r : ds.records) labels.push_back(r.label);

  auto fn = [&](bool with_grad) {
    Tape t;
    const auto preds = forward_scores(t, mp, ds, idx, alphas, true);
    const auto loss = t.bce_mean(preds, labels);
    if (with_grad) t.backward(loss);
    return t.value(loss).item();
  };
  const auto res = finite_difference_check(mp.all(), fn, 1e-5);
  CHECK(res.max_rel_err <= 1e-4);
}

TEST_CASE("init rejects empty vocabularies") {
  ModelConfig cfg;
  CHECK_THROWS_AS(ModelParams::init(0, 5, 3, 2, cfg, 1), ConfigError);
}

}  // TEST_SUITE
