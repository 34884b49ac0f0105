#pragma once

// Arborescent tangle expressions: AST, parser, printer and pillowcase slope.

#include <memory>
#include <string>
#include <variant>

#include "pillow/exactgeom.hpp"

namespace pillow {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Rational {
  long p;
  long q;  // q == 0 encodes infinity (p == 1)
};
struct Sum {
  ExprPtr left, right;
};
struct Rotate {
  ExprPtr inner;
};
struct Twist {
  ExprPtr inner;
  long n;
};
struct Mirror {
  ExprPtr inner;
};
struct Hat {
  ExprPtr inner;
};
struct Earring {
  ExprPtr inner;
};
struct Sheared {
  ExprPtr inner;
  ShearSpec spec;
};

struct Expr {
  std::variant<Rational, Sum, Rotate, Twist, Mirror, Hat, Earring, Sheared> node;
};

ExprPtr make_rational(long p, long q);  // reduces; throws on 0/0
ExprPtr make_sum(ExprPtr l, ExprPtr r);
ExprPtr make_rotate(ExprPtr e);
ExprPtr make_twist(ExprPtr e, long n);
ExprPtr make_mirror(ExprPtr e);
ExprPtr make_hat(ExprPtr e);
ExprPtr make_earring(ExprPtr e);
ExprPtr make_sheared(ExprPtr e, ShearSpec s);

ExprPtr parse(const std::string& text);
std::string print(const ExprPtr& e);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool contains_earring(const ExprPtr& e);

// Extended rational: infinite == true means the slope 1/0.
struct Slope {
  bool infinite = false;
  Q value;
};
bool operator==(const Slope& a, const Slope& b);
std::string to_string(const Slope& s);

Slope slope(const ExprPtr& e);

}  // namespace pillow
