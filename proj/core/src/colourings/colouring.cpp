#include "expramsey/colourings/colouring.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "expramsey/colourings/lacunary.hpp"
#include "expramsey/error.hpp"
#include "expramsey/tower/arith.hpp"
#include "expramsey/tower/eval.hpp"
#include "expramsey/tower/log_star.hpp"

namespace expramsey::colourings {

namespace {

constexpr unsigned kMaxColours = 1u << 24;

unsigned log_star_u64(std::uint64_t v) {
  if (v <= 1) return 0;
  if (v <= 2) return 1;
  if (v <= 4) return 2;
  if (v <= 16) return 3;
  if (v <= 65536) return 4;
  return 5;
}

class LogStarColouring final : public Colouring {
 public:
  explicit LogStarColouring(unsigned r) : r_(r) {}
  unsigned k() const override { return r_ + 3; }
  unsigned colour(const ExpTerm& x) const override {
    if (x.is_literal(1)) return r_ + 3;
    return from_level(tower::log_star(x));
  }
  unsigned colour(std::uint64_t x) const override {
    if (x == 1) return r_ + 3;
    return from_level(log_star_u64(x));
  }
  std::string descriptor() const override { return "logstar:r=" + std::to_string(r_); }

 private:
  unsigned from_level(unsigned l) const { return (l - 1) % (r_ + 2) + 1; }
  unsigned r_;
};

class SchurExpColouring final : public Colouring {
 public:
  unsigned k() const override { return 16; }
  unsigned colour(const ExpTerm& x) const override {
    if (auto v = x.small_value(); v && *v <= ~std::uint64_t{0}) return colour(static_cast<std::uint64_t>(*v));
    return encode(tower::eval_mod(x, 4), tower::max_root_exponent_mod(x, 4));
  }
  unsigned colour(std::uint64_t x) const override {
    if (x == 0) throw Error(ErrorKind::OutOfDomain, "colourings are defined on positive integers");
    unsigned l = 0;
    for (auto [p, e] : tower::factorize_u64(x)) l = std::gcd(l, e);
    return encode(x % 4, l % 4);
  }
  std::string descriptor() const override { return "schurexp"; }
  std::string label(unsigned c) const override {
    return "(" + std::to_string((c - 1) / 4) + "," + std::to_string((c - 1) % 4) + ")";
  }

 private:
  static unsigned encode(std::uint64_t f1, std::uint64_t f2) { return static_cast<unsigned>(f1 * 4 + f2 + 1); }
};

class ConstantColouring final : public Colouring {
 public:
  explicit ConstantColouring(unsigned k) : k_(k) {}
  unsigned k() const override { return k_; }
  unsigned colour(const ExpTerm&) const override { return 1; }
  unsigned colour(std::uint64_t) const override { return 1; }
  std::string descriptor() const override { return "const:k=" + std::to_string(k_); }

 private:
  unsigned k_;
};

class TableColouring final : public Colouring {
 public:
  TableColouring(std::vector<unsigned> map, unsigned k, std::string source)
      : map_(std::move(map)), k_(k), source_(std::move(source)) {}
  unsigned k() const override { return k_; }
  unsigned colour(const ExpTerm& x) const override {
    auto v = eval_small(x, map_.size());
    if (!v) throw out_of_domain(x.to_string());
    return colour(static_cast<std::uint64_t>(*v));
  }
  unsigned colour(std::uint64_t x) const override {
    if (x == 0 || x > map_.size()) throw out_of_domain(std::to_string(x));
    return map_[x - 1];
  }
  std::string descriptor() const override {
    if (!source_.empty()) return "table:" + source_;
    nlohmann::ordered_json j;
    j["k"] = k_;
    j["map"] = map_;
    return "table:" + j.dump();
  }

 private:
  Error out_of_domain(const std::string& x) const {
    return Error(ErrorKind::OutOfDomain, "table colouring covers 1.." + std::to_string(map_.size()) + ", got " + x);
  }
  std::vector<unsigned> map_;
  unsigned k_;
  std::string source_;
};

class ProductColouring final : public Colouring {
 public:
  explicit ProductColouring(std::vector<ColouringPtr> parts) : parts_(std::move(parts)) {
    std::uint64_t k = 1;
    for (const auto& p : parts_) {
      k *= p->k();
      if (k > kMaxColours) throw Error(ErrorKind::InvalidArgument, "product colouring has too many colours");
    }
    k_ = static_cast<unsigned>(k);
  }
  unsigned k() const override { return k_; }
  unsigned colour(const ExpTerm& x) const override {
    return combine([&](const Colouring& c) { return c.colour(x); });
  }
  unsigned colour(std::uint64_t x) const override {
    return combine([&](const Colouring& c) { return c.colour(x); });
  }
  std::string descriptor() const override {
    std::string s = "product:";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "+" : "") + parts_[i]->descriptor();
    return s;
  }
  std::string label(unsigned c) const override {
    std::string s = "(";
    unsigned rest = c - 1;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const unsigned ki = parts_[i]->k();
      s += (i ? "," : "") + parts_[i]->label(rest % ki + 1);
      rest /= ki;
    }
    return s + ")";
  }

 private:
  // First component is the least significant digit.
  template <class F>
  unsigned combine(F&& f) const {
    unsigned c = 0, scale = 1;
    for (const auto& p : parts_) {
      c += (f(*p) - 1) * scale;
      scale *= p->k();
    }
    return c + 1;
  }
  std::vector<ColouringPtr> parts_;
  unsigned k_ = 1;
};

unsigned parse_unsigned(std::string_view s, const char* what) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, std::string(what) + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view name, std::string_view text) {
  std::map<std::string, std::string, std::less<>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorKind::Parse, std::string(name) + ": expected key=value, got '" + std::string(item) + "'");
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    pos = comma + 1;
  }
  return out;
}

class Params {
 public:
  Params(std::string_view name, std::string_view text) : name_(name), values_(parse_params(name, text)) {}

  std::optional<std::string> take(std::string_view key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }
  unsigned take_unsigned(std::string_view key, unsigned fallback) {
    auto v = take(key);
    return v ? parse_unsigned(*v, name_.c_str()) : fallback;
  }
  void finish() const {
    if (!values_.empty()) {
      throw Error(ErrorKind::Parse, name_ + ": unknown parameter '" + values_.begin()->first + "'");
    }
  }

 private:
  std::string name_;
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace

ColouringPtr logstar_colouring(unsigned r) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "logstar colouring needs r >= 1");
  return std::make_shared<LogStarColouring>(r);
}

ColouringPtr schur_exp_colouring() { return std::make_shared<SchurExpColouring>(); }

ColouringPtr constant_colouring(unsigned k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "need at least one colour");
  return std::make_shared<ConstantColouring>(k);
}

ColouringPtr table_colouring(std::vector<unsigned> map, unsigned k, std::string source) {
  if (k < 1 || k > kMaxColours) throw Error(ErrorKind::InvalidArgument, "table colouring: bad k");
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] < 1 || map[i] > k) {
      throw Error(ErrorKind::InvalidArgument,
                  "table colouring: colour of " + std::to_string(i + 1) + " is outside 1.." + std::to_string(k));
    }
  }
  return std::make_shared<TableColouring>(std::move(map), k, std::move(source));
}

ColouringPtr table_colouring_from_json(const std::string& text, std::string source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("table colouring: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("map") || !j["k"].is_number_unsigned() ||
      !j["map"].is_array()) {
    throw Error(ErrorKind::Parse, "table colouring: expected {\"k\": int, \"map\": [...]}");
  }
  std::vector<unsigned> map;
  for (const auto& c : j["map"]) {
    if (!c.is_number_unsigned()) throw Error(ErrorKind::Parse, "table colouring: colours must be positive integers");
    map.push_back(c.get<unsigned>());
  }
  return table_colouring(std::move(map), j["k"].get<unsigned>(), std::move(source));
}

ColouringPtr table_colouring_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open table colouring '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return table_colouring_from_json(ss.str(), path);
}

ColouringPtr product_colouring(std::vector<ColouringPtr> parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "product of no colourings");
  if (parts.size() == 1) return parts.front();
  return std::make_shared<ProductColouring>(std::move(parts));
}

ColouringPtr parse_colouring(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (name == "product") {
    std::vector<ColouringPtr> parts;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t plus = rest.find('+', pos);
      if (plus == std::string_view::npos) plus = rest.size();
      parts.push_back(parse_colouring(rest.substr(pos, plus - pos)));
      pos = plus + 1;
    }
    return product_colouring(std::move(parts));
  }
  if (name == "table") {
    if (rest.empty()) throw Error(ErrorKind::Parse, "table: missing path");
    if (rest.front() == '{') return table_colouring_from_json(std::string(rest));
    return table_colouring_from_file(std::string(rest));
  }

  Params params(name, rest);
  ColouringPtr out;
  if (name == "logstar") {
    out = logstar_colouring(params.take_unsigned("r", 1));
  } else if (name == "schurexp") {
    out = schur_exp_colouring();
  } else if (name == "const") {
    out = constant_colouring(params.take_unsigned("k", 1));
  } else if (name == "lacunary") {
    auto seq = params.take("seq");
    if (!seq) throw Error(ErrorKind::Parse, "lacunary: missing seq=");
    out = lacunary_colouring(*seq, params.take_unsigned("nmax", 12));
  } else if (name == "pow2abb") {
    out = pow2_abb_colouring(params.take_unsigned("range", 12));
  } else if (name == "abbb") {
    out = abbb_colouring(params.take_unsigned("range", 8));
  } else {
    throw Error(ErrorKind::Parse, "unknown colouring '" + name + "'");
  }
  params.finish();
  return out;
}

}  // namespace expramsey::colourings
