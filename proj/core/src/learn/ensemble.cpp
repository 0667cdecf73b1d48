// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stormrider/learn/ensemble.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/features.hpp"

namespace stormrider::learn {
namespace {

constexpr std::string_view kMagic = "stormrider-model v1";

/// Whitespace tokenizer over the model text that reports line numbers.
class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  std::string_view next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unexpected end of model");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view word) {
    const auto got = next();
    if (got != word) fail("expected '" + std::string(word) + "', found '" + std::string(got) + "'");
  }

  double number() {
    const auto tok = next();
    const auto v = parse_double(tok);
    if (!v) fail("bad number '" + std::string(tok) + "'");
    return *v;
  }

  long long integer() {
    const auto tok = next();
    const auto v = parse_integer(tok);
    if (!v) fail("bad integer '" + std::string(tok) + "'");
    return *v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("model line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& n = nodes[i];
    if (!n.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(n.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(n.right), d + 1);
    }
  }
  return deepest;
}

double TreeEnsemble::response(double raw) const {
  if (kind == ModelKind::kRandomForest) return raw;
  if (objective == Objective::kTweedie) return std::exp(raw);
  return std::max(0.0, raw);
}

std::vector<double> TreeEnsemble::gain_by_feature() const {
  const std::size_t width = feature_schema.empty() ? kFeatureCount : feature_schema.size();
  std::vector<std::vector<double>> gains(width);
  for (const auto& t : trees) {
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) gains.at(static_cast<std::size_t>(n.feature)).push_back(n.gain);
    }
  }
  // Sorted summation keeps totals independent of tree order.
  std::vector<double> total(width, 0.0);
  for (std::size_t f = 0; f < width; ++f) {
    std::sort(gains[f].begin(), gains[f].end());
    for (const double g : gains[f]) total[f] += g;
  }
  return total;
}

std::string TreeEnsemble::serialize() const {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "kind " << (kind == ModelKind::kRandomForest ? "rf" : "gbdt") << '\n';
  out << "objective " << to_string(objective) << '\n';
  out << "tweedie_power " << format_double(tweedie_power) << '\n';
  out << "base_score " << format_double(base_score) << '\n';
  out << "learning_rate " << format_double(learning_rate) << '\n';
  out << "features " << feature_schema.size();
  for (const auto& name : feature_schema) out << ' ' << name;
  out << '\n';
  out << "params " << params.size() << '\n';
  for (const auto& [k, v] : params) out << k << ' ' << v << '\n';
  out << "trees " << trees.size() << '\n';
  for (const auto& t : trees) {
    out << "tree " << t.nodes.size() << '\n';
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        out << "leaf " << format_double(n.value) << ' ' << n.cover << '\n';
      } else {
        out << "split " << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' '
            << n.right << ' ' << (n.default_left ? 1 : 0) << ' ' << format_double(n.gain) << ' '
            << n.cover << '\n';
      }
    }
  }
  return out.str();
}

TreeEnsemble TreeEnsemble::deserialize(std::string_view text) {
  Tokens tok(text);
  tok.expect("stormrider-model");
  tok.expect("v1");
  TreeEnsemble m;
  tok.expect("kind");
  const auto kind = tok.next();
  if (kind == "rf") {
    m.kind = ModelKind::kRandomForest;
  } else if (kind == "gbdt") {
    m.kind = ModelKind::kGbdt;
  } else {
    tok.fail("unknown model kind '" + std::string(kind) + "'");
  }
  tok.expect("objective");
  const auto obj = tok.next();
  if (obj == to_string(Objective::kSquared)) {
    m.objective = Objective::kSquared;
  } else if (obj == to_string(Objective::kTweedie)) {
    m.objective = Objective::kTweedie;
  } else {
    tok.fail("unknown objective '" + std::string(obj) + "'");
  }
  tok.expect("tweedie_power");
  m.tweedie_power = tok.number();
  tok.expect("base_score");
  m.base_score = tok.number();
  tok.expect("learning_rate");
  m.learning_rate = tok.number();
  tok.expect("features");
  const auto n_features = tok.integer();
  if (n_features < 0) tok.fail("negative feature count");
  for (long long i = 0; i < n_features; ++i) m.feature_schema.emplace_back(tok.next());
  tok.expect("params");
  const auto n_params = tok.integer();
  for (long long i = 0; i < n_params; ++i) {
    std::string key(tok.next());
    m.params.emplace_back(std::move(key), std::string(tok.next()));
  }
  tok.expect("trees");
  const auto n_trees = tok.integer();
  if (n_trees < 0) tok.fail("negative tree count");
  m.trees.resize(static_cast<std::size_t>(n_trees));
  for (auto& t : m.trees) {
    tok.expect("tree");
    const auto n_nodes = tok.integer();
    if (n_nodes < 1) tok.fail("tree without nodes");
    t.nodes.resize(static_cast<std::size_t>(n_nodes));
    for (auto& n : t.nodes) {
      const auto tag = tok.next();
      if (tag == "leaf") {
        n.value = tok.number();
        n.cover = static_cast<std::uint32_t>(tok.integer());
      } else if (tag == "split") {
        n.feature = static_cast<std::int32_t>(tok.integer());
        n.threshold = tok.number();
        n.left = static_cast<std::int32_t>(tok.integer());
        n.right = static_cast<std::int32_t>(tok.integer());
        n.default_left = tok.integer() != 0;
        n.gain = tok.number();
        n.cover = static_cast<std::uint32_t>(tok.integer());
        if (n.feature < 0 || (n_features > 0 && n.feature >= n_features)) tok.fail("split feature out of range");
        if (n.left <= 0 || n.right <= 0 || n.left >= n_nodes || n.right >= n_nodes) tok.fail("child index out of range");
        if (!std::isfinite(n.threshold)) tok.fail("non-finite threshold");
      } else {
        tok.fail("expected 'leaf' or 'split', found '" + std::string(tag) + "'");
      }
    }
  }
  return m;
}

void TreeEnsemble::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model " + path.string());
  out << serialize();
  if (!out) throw DataError("failed writing model " + path.string());
}

TreeEnsemble TreeEnsemble::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

std::vector<std::string> panel_schema() {
  const auto& names = feature_names();
  return {names.begin(), names.end()};
}

std::vector<double> predict_raw(const TreeEnsemble& model, const FeatureMatrix& x) {
  if (!model.feature_schema.empty() && x.cols() != model.feature_schema.size())
    throw std::invalid_argument("predict: matrix has " + std::to_string(x.cols()) + " columns, model expects " +
                                std::to_string(model.feature_schema.size()));
  std::vector<double> out(x.rows());
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ri = 0; ri < n; ++ri) {
    const auto r = static_cast<std::size_t>(ri);
    out[r] = model.raw_score([&](std::size_t c) { return x(r, c); });
  }
  return out;
}

std::vector<double> predict(const TreeEnsemble& model, const FeatureMatrix& x,
                            std::span<const std::string> schema) {
  if (!std::equal(schema.begin(), schema.end(), model.feature_schema.begin(), model.feature_schema.end()))
    throw std::invalid_argument("predict: feature schema does not match the model");
  return predict(model, x);
}

std::vector<double> predict(const TreeEnsemble& model, const FeatureMatrix& x) {
  auto out = predict_raw(model, x);
  for (auto& v : out) v = model.response(v);
  return out;
}

std::vector<double> variable_importance(const TreeEnsemble& model) {
  auto total = model.gain_by_feature();
  const double top = total.empty() ? 0.0 : *std::max_element(total.begin(), total.end());
  for (auto& v : total) v = top > 0.0 ? v / top : 0.0;
  return total;
}

}  // namespace stormrider::learn
