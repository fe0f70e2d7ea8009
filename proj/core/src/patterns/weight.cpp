#include "expramsey/patterns/weight.hpp"

#include <algorithm>

#include <json.hpp>

#include "expramsey/error.hpp"
#include "expramsey/tower/eval.hpp"

namespace expramsey::patterns {

namespace {

WeightFn::Key canonical(WeightFn::Key key) {
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  return key;
}

bool is_subset(const WeightFn::Key& small, const WeightFn::Key& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

WeightFn::Key parse_key(const std::string& text) {
  auto arr = nlohmann::json::parse(text, nullptr, false);
  if (arr.is_discarded() || !arr.is_array()) {
    throw Error(ErrorKind::Parse, "weight key must be a JSON list of integers: " + text);
  }
  WeightFn::Key key;
  for (const auto& v : arr) {
    if (v.is_number_unsigned()) {
      key.emplace_back(v.get<std::uint64_t>());
    } else if (v.is_string()) {
      key.emplace_back(v.get<std::string>());
    } else {
      throw Error(ErrorKind::Parse, "weight key members must be positive integers: " + text);
    }
    if (key.back() < 1) throw Error(ErrorKind::Parse, "weight key members must be positive: " + text);
  }
  return canonical(std::move(key));
}

}  // namespace

std::string key_string(const WeightFn::Key& key) {
  std::string s = "[";
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + key[i].str();
  return s + "]";
}

WeightFn WeightFn::constant(std::uint64_t w) {
  WeightFn f;
  f.set_default(w);
  return f;
}

void WeightFn::set(Key key, std::uint64_t w) { table_[canonical(std::move(key))] = w; }

std::uint64_t WeightFn::operator()(const Key& set) const {
  const Key k = canonical(set);
  if (auto it = table_.find(k); it != table_.end()) return it->second;
  if (default_) return *default_;
  throw Error(ErrorKind::WeightUndefined, "no weight for " + key_string(k));
}

std::uint64_t WeightFn::normalized(const Key& set) const {
  const Key k = canonical(set);
  std::uint64_t w = (*this)(k);
  for (const auto& [b, wb] : table_) {
    if (is_subset(b, k)) w = std::max(w, wb);
  }
  return w;
}

std::uint64_t WeightFn::lookup(std::span<const tower::ExpTerm> members, bool normalize) const {
  Key key;
  for (const auto& t : members) {
    if (t.has_symbol() || tower::eval_exact(t).is_huge()) {
      if (table_.empty() && default_) return *default_;
      throw Error(ErrorKind::WeightUndefined,
                  "weight lookup needs exact generator values, got " + t.to_string());
    }
    key.push_back(tower::eval_exact(t).value());
  }
  return normalize ? normalized(key) : (*this)(key);
}

WeightFn WeightFn::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::Parse, "weight function must be a JSON object");
  WeightFn f;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_unsigned()) throw Error(ErrorKind::Parse, "weight for " + k + " must be a non-negative integer");
    if (k == "*") {
      f.set_default(v.get<std::uint64_t>());
    } else {
      f.set(parse_key(k), v.get<std::uint64_t>());
    }
  }
  return f;
}

std::string WeightFn::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, w] : table_) j[key_string(k)] = w;
  if (default_) j["*"] = *default_;
  return j.dump();
}

}  // namespace expramsey::patterns
