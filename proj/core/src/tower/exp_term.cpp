#include "expramsey/tower/exp_term.hpp"

#include <cctype>
#include <functional>

#include "expramsey/error.hpp"
#include "expramsey/tower/eval.hpp"

namespace expramsey::tower {

struct ExpTerm::Node {
  Kind kind = Kind::Literal;
  bool symbolic = false;
  bool small = false;
  u128 small_value = 0;
  BigInt value;
  std::vector<ExpTerm> children;
  std::string name;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

ExpTerm ExpTerm::literal(const BigInt& value) {
  if (value < 1) {
    throw Error(ErrorKind::InvalidArgument, "literal must be >= 1, got " + value.str());
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Literal;
  node->value = value;
  if (auto s = to_u128(value)) {
    node->small = true;
    node->small_value = *s;
    node->hash = mix(static_cast<std::uint64_t>(*s), static_cast<std::uint64_t>(*s >> 64));
  } else {
    node->hash = std::hash<std::string>{}(value.str());
  }
  return ExpTerm(std::move(node));
}

ExpTerm ExpTerm::literal(std::uint64_t value) {
  if (value < 1) throw Error(ErrorKind::InvalidArgument, "literal must be >= 1, got 0");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Literal;
  node->value = value;
  node->small = true;
  node->small_value = value;
  node->hash = mix(value, 0);
  return ExpTerm(std::move(node));
}

ExpTerm ExpTerm::power(const ExpTerm& base, const ExpTerm& exponent) {
  if (exponent.is_literal(1)) return base;
  if (base.is_literal(1)) return base;
  auto node = std::make_shared<Node>();
  node->kind = Kind::Power;
  node->symbolic = base.has_symbol() || exponent.has_symbol();
  node->hash = mix(mix(0x51ed2701, base.hash()), exponent.hash());
  node->children = {base, exponent};
  return ExpTerm(std::move(node));
}

ExpTerm ExpTerm::product(const ExpTerm& a, const ExpTerm& b) { return product(std::vector<ExpTerm>{a, b}); }

ExpTerm ExpTerm::product(std::vector<ExpTerm> factors) {
  std::vector<ExpTerm> flat;
  flat.reserve(factors.size());
  std::function<void(const ExpTerm&)> push = [&](const ExpTerm& f) {
    if (f.is_product()) {
      for (const auto& g : f.factors()) push(g);
    } else if (!f.is_literal(1)) {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) push(f);

  // Merge runs of adjacent literals while the product stays under the cutoff.
  const BigInt& cutoff = default_config().cutoff;
  std::vector<ExpTerm> merged;
  merged.reserve(flat.size());
  for (auto& f : flat) {
    if (f.is_literal() && !merged.empty() && merged.back().is_literal()) {
      BigInt p = merged.back().value() * f.value();
      if (p <= cutoff) {
        merged.back() = literal(p);
        continue;
      }
    }
    merged.push_back(std::move(f));
  }

  if (merged.empty()) return literal(std::uint64_t{1});
  if (merged.size() == 1) return merged.front();

  auto node = std::make_shared<Node>();
  node->kind = Kind::Product;
  std::size_t h = 0x9a0d;
  for (const auto& f : merged) {
    node->symbolic = node->symbolic || f.has_symbol();
    h = mix(h, f.hash());
  }
  node->hash = h;
  node->children = std::move(merged);
  return ExpTerm(std::move(node));
}

ExpTerm ExpTerm::symbol(std::string name) {
  if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty symbol name");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Symbol;
  node->symbolic = true;
  node->hash = mix(0x5e3b, std::hash<std::string>{}(name));
  node->name = std::move(name);
  return ExpTerm(std::move(node));
}

ExpTerm::Kind ExpTerm::kind() const noexcept { return node_->kind; }

const BigInt& ExpTerm::value() const {
  if (!is_literal()) throw Error(ErrorKind::InvalidArgument, "value() on non-literal term");
  return node_->value;
}

std::optional<u128> ExpTerm::small_value() const noexcept {
  if (node_->kind == Kind::Literal && node_->small) return node_->small_value;
  return std::nullopt;
}

bool ExpTerm::is_literal(std::uint64_t v) const noexcept {
  return node_->kind == Kind::Literal && node_->small && node_->small_value == v;
}

const ExpTerm& ExpTerm::base() const {
  if (!is_power()) throw Error(ErrorKind::InvalidArgument, "base() on non-power term");
  return node_->children[0];
}

const ExpTerm& ExpTerm::exponent() const {
  if (!is_power()) throw Error(ErrorKind::InvalidArgument, "exponent() on non-power term");
  return node_->children[1];
}

std::span<const ExpTerm> ExpTerm::factors() const {
  if (!is_product()) throw Error(ErrorKind::InvalidArgument, "factors() on non-product term");
  return node_->children;
}

const std::string& ExpTerm::name() const {
  if (!is_symbol()) throw Error(ErrorKind::InvalidArgument, "name() on non-symbol term");
  return node_->name;
}

bool ExpTerm::has_symbol() const noexcept { return node_->symbolic; }
std::size_t ExpTerm::hash() const noexcept { return node_->hash; }

bool operator==(const ExpTerm& a, const ExpTerm& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case ExpTerm::Kind::Literal:
      if (a.node_->small && b.node_->small) return a.node_->small_value == b.node_->small_value;
      return a.node_->value == b.node_->value;
    case ExpTerm::Kind::Symbol:
      return a.node_->name == b.node_->name;
    case ExpTerm::Kind::Power:
    case ExpTerm::Kind::Product:
      return a.node_->children == b.node_->children;
  }
  return false;
}

std::string ExpTerm::to_string() const {
  switch (kind()) {
    case Kind::Literal:
      return node_->small ? to_decimal(node_->small_value) : node_->value.str();
    case Kind::Symbol:
      return node_->name;
    case Kind::Power: {
      const ExpTerm& b = base();
      const ExpTerm& e = exponent();
      std::string bs = b.to_string();
      if (b.is_power() || b.is_product()) bs = "(" + bs + ")";
      std::string es = e.to_string();
      if (e.is_product()) es = "(" + es + ")";
      return bs + "^" + es;
    }
    case Kind::Product: {
      std::string s;
      for (const auto& f : factors()) {
        if (!s.empty()) s += "*";
        s += f.to_string();
      }
      return s;
    }
  }
  return {};
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExpTerm parse() {
    ExpTerm t = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, msg + " at offset " + std::to_string(pos_) + " in '" +
                                      std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExpTerm expr() {
    std::vector<ExpTerm> factors{power()};
    while (accept('*')) factors.push_back(power());
    if (factors.size() == 1) return factors.front();
    return ExpTerm::product(std::move(factors));
  }

  ExpTerm power() {
    ExpTerm b = atom();
    if (accept('^')) return ExpTerm::power(b, power());
    return b;
  }

  ExpTerm atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExpTerm t = expr();
      if (!accept(')')) fail("expected ')'");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      BigInt v(std::string(text_.substr(start, pos_ - start)));
      if (v == 0) fail("literal 0 does not denote a positive integer");
      return ExpTerm::literal(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return ExpTerm::symbol(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExpTerm parse_term(std::string_view text) { return Parser(text).parse(); }

ExpTerm substitute(const ExpTerm& t, std::span<const std::string> names,
                   std::span<const ExpTerm> replacements) {
  if (names.size() != replacements.size()) {
    throw Error(ErrorKind::ArityMismatch, "substitute: names and replacements differ in length");
  }
  if (!t.has_symbol()) return t;
  switch (t.kind()) {
    case ExpTerm::Kind::Symbol:
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == t.name()) return replacements[i];
      }
      return t;
    case ExpTerm::Kind::Power:
      return ExpTerm::power(substitute(t.base(), names, replacements),
                            substitute(t.exponent(), names, replacements));
    case ExpTerm::Kind::Product: {
      std::vector<ExpTerm> fs;
      for (const auto& f : t.factors()) fs.push_back(substitute(f, names, replacements));
      return ExpTerm::product(std::move(fs));
    }
    case ExpTerm::Kind::Literal:
      break;
  }
  return t;
}

ExpTerm tower_of_twos(unsigned height) {
  if (height == 0) return ExpTerm::literal(std::uint64_t{1});
  ExpTerm t = ExpTerm::literal(std::uint64_t{2});
  for (unsigned i = 1; i < height; ++i) t = ExpTerm::power(ExpTerm::literal(std::uint64_t{2}), t);
  return t;
}

}  // namespace expramsey::tower
