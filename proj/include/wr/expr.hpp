#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace wr {

// Small interpreted expression grammar for scenario files and closed-form
// cross-checks: numbers, identifiers, + - * / ^, unary minus, and a
// whitelisted set of calls (trig, hyperbolic, exp, log, sqrt, erf, abs, pow).
// Expressions are immutable trees shared by value.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

using Env = std::map<std::string, double>;

// Throws DomainError on syntax errors or non-whitelisted identifiers/calls.
Expr parse_expr(const std::string& text);

double eval(const Expr& e, const Env& env);

// Exact symbolic derivative with respect to `var`, lightly simplified.
Expr diff(const Expr& e, const std::string& var);

// Free variables referenced by the expression.
std::vector<std::string> variables(const Expr& e);

std::string to_string(const Expr& e);

Expr make_num(double v);
Expr make_var(const std::string& name);

} // namespace wr
