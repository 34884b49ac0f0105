#include "pillow/tangle.hpp"

#include <cctype>
#include <numeric>

#include "pillow/errors.hpp"

namespace pillow {

namespace {

ExprPtr wrap(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

void require(const ExprPtr& e) {
  if (!e) throw PreconditionError("null tangle expression");
}

}  // namespace

ExprPtr make_rational(long p, long q) {
  if (p == 0 && q == 0) throw PreconditionError("Q(0/0) is not a tangle");
  if (q == 0) return wrap({Rational{1, 0}});
  if (q < 0) {
    p = -p;
    q = -q;
  }
  long g = std::gcd(p < 0 ? -p : p, q);
  return wrap({Rational{p / g, q / g}});
}

ExprPtr make_sum(ExprPtr l, ExprPtr r) {
  require(l);
  require(r);
  return wrap({Sum{std::move(l), std::move(r)}});
}
ExprPtr make_rotate(ExprPtr e) {
  require(e);
  return wrap({Rotate{std::move(e)}});
}
ExprPtr make_twist(ExprPtr e, long n) {
  require(e);
  return wrap({Twist{std::move(e), n}});
}
ExprPtr make_mirror(ExprPtr e) {
  require(e);
  return wrap({Mirror{std::move(e)}});
}
ExprPtr make_hat(ExprPtr e) {
  require(e);
  return wrap({Hat{std::move(e)}});
}
ExprPtr make_earring(ExprPtr e) {
  require(e);
  return wrap({Earring{std::move(e)}});
}
ExprPtr make_sheared(ExprPtr e, ShearSpec s) {
  require(e);
  s.validate();
  return wrap({Sheared{std::move(e), std::move(s)}});
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr parse_all() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("expected integer");
    }
    try {
      return std::stol(s_.substr(start, pos_ - start));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("integer out of range");
    }
  }

  Q rational() {
    long p = integer();
    long q = 1;
    if (peek('/')) {
      ++pos_;
      std::size_t at = pos_;
      q = integer();
      if (q <= 0) {
        pos_ = at;
        fail("denominator must be positive");
      }
    }
    return make_q(p, q);
  }

  ExprPtr parse_sum() {
    ExprPtr left = parse_atom();
    while (peek('+')) {
      ++pos_;
      ExprPtr right = parse_atom();
      left = make_sum(left, right);
    }
    return left;
  }

  ExprPtr parse_atom() {
    if (peek('(')) {
      ++pos_;
      ExprPtr e = parse_sum();
      expect(')');
      return e;
    }
    std::size_t at = (skip_ws(), pos_);
    std::string name = ident();
    expect('(');
    ExprPtr out;
    if (name == "Q") {
      skip_ws();
      if (s_.compare(pos_, 3, "inf") == 0) {
        pos_ += 3;
        out = make_rational(1, 0);
      } else {
        std::size_t num_at = pos_;
        long p = integer();
        long q = 1;
        if (peek('/')) {
          ++pos_;
          q = integer();
        }
        if (p == 0 && q == 0) {
          pos_ = num_at;
          fail("Q(0/0) is not a rational tangle");
        }
        if (q < 0) {
          pos_ = num_at;
          fail("denominator must be non-negative");
        }
        out = make_rational(p, q);
      }
    } else if (name == "rot") {
      out = make_rotate(parse_sum());
    } else if (name == "mirror") {
      out = make_mirror(parse_sum());
    } else if (name == "hat") {
      out = make_hat(parse_sum());
    } else if (name == "earring") {
      out = make_earring(parse_sum());
    } else if (name == "twist") {
      ExprPtr inner = parse_sum();
      expect(',');
      out = make_twist(inner, integer());
    } else if (name == "shear") {
      ExprPtr inner = parse_sum();
      expect(',');
      std::size_t dir_at = (skip_ws(), pos_);
      std::string dir = ident();
      ShearDir d;
      if (dir == "theta") {
        d = ShearDir::Theta;
      } else if (dir == "gamma") {
        d = ShearDir::Gamma;
      } else {
        pos_ = dir_at;
        fail("shear direction must be 'theta' or 'gamma'");
      }
      expect(',');
      out = make_sheared(inner, ShearSpec::tent(d, rational()));
    } else {
      pos_ = at;
      fail("unknown operation '" + name + "'");
    }
    expect(')');
    return out;
  }
};

bool is_tent(const ShearSpec& s) {
  ShearSpec t = ShearSpec::tent(s.direction, s.t);
  return t.profile == s.profile;
}

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).parse_all(); }

std::string print(const ExprPtr& e) {
  require(e);
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Rational>) {
          if (n.q == 0) return "Q(inf)";
          return "Q(" + std::to_string(n.p) + "/" + std::to_string(n.q) + ")";
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::string r = print(n.right);
          if (std::holds_alternative<Sum>(n.right->node)) r = "(" + r + ")";
          return print(n.left) + "+" + r;
        } else if constexpr (std::is_same_v<T, Rotate>) {
          return "rot(" + print(n.inner) + ")";
        } else if constexpr (std::is_same_v<T, Twist>) {
          return "twist(" + print(n.inner) + "," + std::to_string(n.n) + ")";
        } else if constexpr (std::is_same_v<T, Mirror>) {
          return "mirror(" + print(n.inner) + ")";
        } else if constexpr (std::is_same_v<T, Hat>) {
          return "hat(" + print(n.inner) + ")";
        } else if constexpr (std::is_same_v<T, Earring>) {
          return "earring(" + print(n.inner) + ")";
        } else {
          if (!is_tent(n.spec))
            throw PreconditionError("only tent shear profiles have a textual form");
          std::string dir = n.spec.direction == ShearDir::Theta ? "theta" : "gamma";
          return "shear(" + print(n.inner) + "," + dir + "," + to_string(n.spec.t) + ")";
        }
      },
      e->node);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Rational>) {
          return x.p == y.p && x.q == y.q;
        } else if constexpr (std::is_same_v<T, Sum>) {
          return equal(x.left, y.left) && equal(x.right, y.right);
        } else if constexpr (std::is_same_v<T, Twist>) {
          return x.n == y.n && equal(x.inner, y.inner);
        } else if constexpr (std::is_same_v<T, Sheared>) {
          return x.spec.direction == y.spec.direction && x.spec.t == y.spec.t &&
                 x.spec.profile == y.spec.profile && equal(x.inner, y.inner);
        } else {
          return equal(x.inner, y.inner);
        }
      },
      a->node);
}

bool contains_earring(const ExprPtr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return false;
        } else if constexpr (std::is_same_v<T, Sum>) {
          return contains_earring(n.left) || contains_earring(n.right);
        } else if constexpr (std::is_same_v<T, Earring>) {
          return true;
        } else {
          return contains_earring(n.inner);
        }
      },
      e->node);
}

bool operator==(const Slope& a, const Slope& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.value == b.value;
}

std::string to_string(const Slope& s) { return s.infinite ? "inf" : to_string(s.value); }

Slope slope(const ExprPtr& e) {
  require(e);
  return std::visit(
      [](const auto& n) -> Slope {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Rational>) {
          if (n.q == 0) return {true, Q(0)};
          return {false, make_q(n.p, n.q)};
        } else if constexpr (std::is_same_v<T, Sum>) {
          Slope l = slope(n.left), r = slope(n.right);
          if (l.infinite && r.infinite)
            throw PreconditionError("sum of two vertical tangles is not supported");
          if (l.infinite || r.infinite) return {true, Q(0)};
          return {false, Q(l.value + r.value)};
        } else if constexpr (std::is_same_v<T, Rotate>) {
          Slope s = slope(n.inner);
          if (s.infinite) return {false, Q(0)};
          if (s.value == 0) return {true, Q(0)};
          return {false, Q(-1 / s.value)};
        } else if constexpr (std::is_same_v<T, Twist>) {
          Slope s = slope(n.inner);
          if (s.infinite) return s;
          return {false, Q(s.value + n.n)};
        } else if constexpr (std::is_same_v<T, Mirror> || std::is_same_v<T, Hat>) {
          Slope s = slope(n.inner);
          if (s.infinite) return s;
          return {false, Q(-s.value)};
        } else if constexpr (std::is_same_v<T, Earring>) {
          throw PreconditionError("slope is undefined for expressions with an earring");
        } else {
          return slope(n.inner);
        }
      },
      e->node);
}

}  // namespace pillow
