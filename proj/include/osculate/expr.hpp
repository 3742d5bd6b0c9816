#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "osculate/errors.hpp"
#include "osculate/jet.hpp"

namespace osc {

enum class ExprKind { Literal, Var, Neg, Sin, Cos, Exp, Add, Sub, Mul, Div, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node. Unary nodes use `a`; Pow holds an integer exponent
/// (exponent towers are folded at parse time, so `x^2^3` stores x^8).
struct Expr {
    explicit Expr(ExprKind k) : kind(k) {}

    ExprKind kind;
    double literal = 0.0;
    int var = -1;
    std::string var_name;
    ExprPtr a;
    ExprPtr b;
    int exponent = 0;
};

namespace ast {
ExprPtr lit(double v);
ExprPtr var(int index, std::string name);
ExprPtr neg(ExprPtr x);
ExprPtr sin(ExprPtr x);
ExprPtr cos(ExprPtr x);
ExprPtr exp(ExprPtr x);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr div(ExprPtr l, ExprPtr r);
ExprPtr pow(ExprPtr base, int exponent);
}  // namespace ast

/// Parses with precedence ^ > unary-minus > *,/ > +,-; `^` is
/// right-associative and its exponent must be a (signed) integer literal.
/// Identifiers are checked against `vars` at parse time.
ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& vars);

/// Canonical printing; parse∘print is the identity on ASTs.
std::string print_expr(const Expr& e);
inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

bool expr_equal(const Expr& lhs, const Expr& rhs);
inline bool expr_equal(const ExprPtr& lhs, const ExprPtr& rhs) { return expr_equal(*lhs, *rhs); }

/// Evaluation over double, Jet1 or Jet2 scalars; env is indexed by the
/// variable order given to parse_expr.
template <class S>
S eval_expr(const Expr& e, const std::vector<S>& env) {
    switch (e.kind) {
        case ExprKind::Literal:
            return S(e.literal);
        case ExprKind::Var:
            if (e.var < 0 || std::size_t(e.var) >= env.size())
                throw UnboundVariable("unbound variable '" + e.var_name + "'");
            return env[std::size_t(e.var)];
        case ExprKind::Neg:
            return -eval_expr(*e.a, env);
        case ExprKind::Sin: {
            using std::sin;
            return sin(eval_expr(*e.a, env));
        }
        case ExprKind::Cos: {
            using std::cos;
            return cos(eval_expr(*e.a, env));
        }
        case ExprKind::Exp: {
            using std::exp;
            return exp(eval_expr(*e.a, env));
        }
        case ExprKind::Add:
            return eval_expr(*e.a, env) + eval_expr(*e.b, env);
        case ExprKind::Sub:
            return eval_expr(*e.a, env) - eval_expr(*e.b, env);
        case ExprKind::Mul:
            return eval_expr(*e.a, env) * eval_expr(*e.b, env);
        case ExprKind::Div:
            return checked_div(eval_expr(*e.a, env), eval_expr(*e.b, env));
        case ExprKind::Pow:
            return pow_int(eval_expr(*e.a, env), e.exponent);
    }
    throw Error("corrupt expression node");
}

template <class S>
S eval_expr(const ExprPtr& e, const std::vector<S>& env) {
    return eval_expr<S>(*e, env);
}

/// Evaluates a component list (a vector-valued expression) over any scalar.
template <class S>
std::vector<S> eval_components(const std::vector<ExprPtr>& comps, const std::vector<S>& env) {
    std::vector<S> out;
    out.reserve(comps.size());
    for (const ExprPtr& c : comps) out.push_back(eval_expr<S>(*c, env));
    return out;
}

}  // namespace osc
