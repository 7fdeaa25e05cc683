#include "wr/expr.hpp"

#include "wr/errors.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace wr {

enum class Op { num, var, add, sub, mul, div, pow, neg, call };

struct ExprNode {
    Op op;
    double value = 0.0;   // num
    std::string name;     // var / call
    Expr a, b;            // operands
};

namespace {

Expr node(Op op, Expr a = nullptr, Expr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_num(const Expr& e, double v) { return e->op == Op::num && e->value == v; }

Expr num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::num;
    n->value = v;
    return n;
}

Expr add(Expr a, Expr b) {
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    if (a->op == Op::num && b->op == Op::num) return num(a->value + b->value);
    return node(Op::add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_num(b, 0.0)) return a;
    if (a->op == Op::num && b->op == Op::num) return num(a->value - b->value);
    if (is_num(a, 0.0)) return node(Op::neg, std::move(b));
    return node(Op::sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    if (a->op == Op::num && b->op == Op::num) return num(a->value * b->value);
    return node(Op::mul, std::move(a), std::move(b));
}

Expr division(Expr a, Expr b) {
    if (is_num(a, 0.0)) return num(0.0);
    if (is_num(b, 1.0)) return a;
    if (a->op == Op::num && b->op == Op::num && b->value != 0.0) return num(a->value / b->value);
    return node(Op::div, std::move(a), std::move(b));
}

Expr power(Expr a, Expr b) {
    if (is_num(b, 0.0)) return num(1.0);
    if (is_num(b, 1.0)) return a;
    if (a->op == Op::num && b->op == Op::num) return num(std::pow(a->value, b->value));
    return node(Op::pow, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (a->op == Op::num) return num(-a->value);
    if (a->op == Op::neg) return a->a;
    return node(Op::neg, std::move(a));
}

Expr call1(const std::string& fn, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::call;
    n->name = fn;
    n->a = std::move(a);
    return n;
}

const std::set<std::string>& whitelist() {
    static const std::set<std::string> fns = {"sin",  "cos",  "tan", "sinh", "cosh", "tanh",
                                              "exp",  "log",  "sqrt", "erf", "abs",  "pow",
                                              "asin", "acos", "atan"};
    return fns;
}

struct Parser {
    std::string s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& why) {
        throw DomainError("expression parse error at offset " + std::to_string(pos) + ": " + why);
    }

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e = add(e, term());
            else if (eat('-'))
                e = sub(e, term());
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*'))
                e = mul(e, unary());
            else if (eat('/'))
                e = division(e, unary());
            else
                return e;
        }
    }

    Expr unary() {
        if (eat('-')) return neg(unary());
        if (eat('+')) return unary();
        return power_term();
    }

    Expr power_term() {
        Expr base = atom();
        if (eat('^')) return power(base, unary()); // right associative
        return base;
    }

    Expr atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (eat('(')) {
            Expr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr number() {
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == 'e' ||
                s[end] == 'E' || ((s[end] == '+' || s[end] == '-') && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        double v = 0.0;
        try {
            v = std::stod(s.substr(pos, end - pos));
        } catch (...) {
            fail("bad number");
        }
        pos = end;
        return num(v);
    }

    Expr identifier() {
        size_t end = pos;
        while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) ++end;
        const std::string name = s.substr(pos, end - pos);
        pos = end;
        if (name == "pi") return num(M_PI);
        if (peek() == '(') {
            if (!whitelist().count(name)) fail("function '" + name + "' is not whitelisted");
            eat('(');
            Expr a = expr();
            if (name == "pow") {
                if (!eat(',')) fail("pow expects two arguments");
                Expr b = expr();
                if (!eat(')')) fail("missing ')'");
                return power(a, b);
            }
            if (!eat(')')) fail("missing ')'");
            return call1(name, a);
        }
        return make_var(name);
    }
};

} // namespace

Expr make_num(double v) { return num(v); }

Expr make_var(const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::var;
    n->name = name;
    return n;
}

Expr parse_expr(const std::string& text) {
    Parser p{text};
    return p.parse();
}

double eval(const Expr& e, const Env& env) {
    switch (e->op) {
        case Op::num: return e->value;
        case Op::var: {
            auto it = env.find(e->name);
            if (it == env.end()) throw DomainError("unbound variable '" + e->name + "'");
            return it->second;
        }
        case Op::add: return eval(e->a, env) + eval(e->b, env);
        case Op::sub: return eval(e->a, env) - eval(e->b, env);
        case Op::mul: return eval(e->a, env) * eval(e->b, env);
        case Op::div: return eval(e->a, env) / eval(e->b, env);
        case Op::pow: return std::pow(eval(e->a, env), eval(e->b, env));
        case Op::neg: return -eval(e->a, env);
        case Op::call: {
            const double x = eval(e->a, env);
            if (e->name == "sin") return std::sin(x);
            if (e->name == "cos") return std::cos(x);
            if (e->name == "tan") return std::tan(x);
            if (e->name == "sinh") return std::sinh(x);
            if (e->name == "cosh") return std::cosh(x);
            if (e->name == "tanh") return std::tanh(x);
            if (e->name == "exp") return std::exp(x);
            if (e->name == "log") return std::log(x);
            if (e->name == "sqrt") return std::sqrt(x);
            if (e->name == "erf") return std::erf(x);
            if (e->name == "abs") return std::abs(x);
            if (e->name == "asin") return std::asin(x);
            if (e->name == "acos") return std::acos(x);
            if (e->name == "atan") return std::atan(x);
            throw DomainError("unknown function '" + e->name + "'");
        }
    }
    throw DomainError("corrupt expression tree");
}

Expr diff(const Expr& e, const std::string& var) {
    switch (e->op) {
        case Op::num: return num(0.0);
        case Op::var: return num(e->name == var ? 1.0 : 0.0);
        case Op::add: return add(diff(e->a, var), diff(e->b, var));
        case Op::sub: return sub(diff(e->a, var), diff(e->b, var));
        case Op::mul: return add(mul(diff(e->a, var), e->b), mul(e->a, diff(e->b, var)));
        case Op::div:
            return division(sub(mul(diff(e->a, var), e->b), mul(e->a, diff(e->b, var))), mul(e->b, e->b));
        case Op::pow: {
            // General case via a^b = exp(b log a); constant exponent shortcut.
            if (e->b->op == Op::num)
                return mul(mul(num(e->b->value), power(e->a, num(e->b->value - 1.0))), diff(e->a, var));
            Expr la = call1("log", e->a);
            Expr inner = add(mul(diff(e->b, var), la), division(mul(e->b, diff(e->a, var)), e->a));
            return mul(power(e->a, e->b), inner);
        }
        case Op::neg: return neg(diff(e->a, var));
        case Op::call: {
            Expr da = diff(e->a, var);
            const std::string& f = e->name;
            Expr outer;
            if (f == "sin") outer = call1("cos", e->a);
            else if (f == "cos") outer = neg(call1("sin", e->a));
            else if (f == "tan") outer = add(num(1.0), mul(call1("tan", e->a), call1("tan", e->a)));
            else if (f == "sinh") outer = call1("cosh", e->a);
            else if (f == "cosh") outer = call1("sinh", e->a);
            else if (f == "tanh") outer = sub(num(1.0), mul(call1("tanh", e->a), call1("tanh", e->a)));
            else if (f == "exp") outer = call1("exp", e->a);
            else if (f == "log") outer = division(num(1.0), e->a);
            else if (f == "sqrt") outer = division(num(0.5), call1("sqrt", e->a));
            else if (f == "erf") outer = mul(num(2.0 / std::sqrt(M_PI)), call1("exp", neg(mul(e->a, e->a))));
            else if (f == "abs") outer = division(e->a, call1("abs", e->a));
            else if (f == "asin") outer = division(num(1.0), call1("sqrt", sub(num(1.0), mul(e->a, e->a))));
            else if (f == "acos") outer = neg(division(num(1.0), call1("sqrt", sub(num(1.0), mul(e->a, e->a)))));
            else if (f == "atan") outer = division(num(1.0), add(num(1.0), mul(e->a, e->a)));
            else throw DomainError("cannot differentiate '" + f + "'");
            return mul(outer, da);
        }
    }
    throw DomainError("corrupt expression tree");
}

namespace {
void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (e->op == Op::var) out.insert(e->name);
    if (e->a) collect_vars(e->a, out);
    if (e->b) collect_vars(e->b, out);
}
} // namespace

std::vector<std::string> variables(const Expr& e) {
    std::set<std::string> s;
    collect_vars(e, s);
    return {s.begin(), s.end()};
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    switch (e->op) {
        case Op::num: os << e->value; break;
        case Op::var: os << e->name; break;
        case Op::add: os << "(" << to_string(e->a) << " + " << to_string(e->b) << ")"; break;
        case Op::sub: os << "(" << to_string(e->a) << " - " << to_string(e->b) << ")"; break;
        case Op::mul: os << "(" << to_string(e->a) << " * " << to_string(e->b) << ")"; break;
        case Op::div: os << "(" << to_string(e->a) << " / " << to_string(e->b) << ")"; break;
        case Op::pow: os << "(" << to_string(e->a) << " ^ " << to_string(e->b) << ")"; break;
        case Op::neg: os << "(-" << to_string(e->a) << ")"; break;
        case Op::call: os << e->name << "(" << to_string(e->a) << ")"; break;
    }
    return os.str();
}

} // namespace wr
