#include "osculate/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <utility>

namespace osc {

namespace ast {

namespace {

ExprPtr unary_node(ExprKind kind, ExprPtr x) {
    Expr e{kind};
    e.a = std::move(x);
    return std::make_shared<const Expr>(std::move(e));
}

ExprPtr binary_node(ExprKind kind, ExprPtr l, ExprPtr r) {
    Expr e{kind};
    e.a = std::move(l);
    e.b = std::move(r);
    return std::make_shared<const Expr>(std::move(e));
}

}  // namespace

ExprPtr lit(double v) {
    Expr e{ExprKind::Literal};
    e.literal = v;
    return std::make_shared<const Expr>(std::move(e));
}

ExprPtr var(int index, std::string name) {
    Expr e{ExprKind::Var};
    e.var = index;
    e.var_name = std::move(name);
    return std::make_shared<const Expr>(std::move(e));
}

ExprPtr neg(ExprPtr x) { return unary_node(ExprKind::Neg, std::move(x)); }
ExprPtr sin(ExprPtr x) { return unary_node(ExprKind::Sin, std::move(x)); }
ExprPtr cos(ExprPtr x) { return unary_node(ExprKind::Cos, std::move(x)); }
ExprPtr exp(ExprPtr x) { return unary_node(ExprKind::Exp, std::move(x)); }

ExprPtr add(ExprPtr l, ExprPtr r) { return binary_node(ExprKind::Add, std::move(l), std::move(r)); }
ExprPtr sub(ExprPtr l, ExprPtr r) { return binary_node(ExprKind::Sub, std::move(l), std::move(r)); }
ExprPtr mul(ExprPtr l, ExprPtr r) { return binary_node(ExprKind::Mul, std::move(l), std::move(r)); }
ExprPtr div(ExprPtr l, ExprPtr r) { return binary_node(ExprKind::Div, std::move(l), std::move(r)); }

ExprPtr pow(ExprPtr base, int exponent) {
    Expr e{ExprKind::Pow};
    e.a = std::move(base);
    e.exponent = exponent;
    return std::make_shared<const Expr>(std::move(e));
}

}  // namespace ast

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Token() = default;
    Token(Tok k, std::size_t p) : kind(k), pos(p) {}

    Tok kind = Tok::End;
    std::size_t pos = 0;
    double number = 0.0;
    bool integral = false;  // number written as a bare integer
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        cur_ = {Tok::End, i_};
        if (i_ >= src_.size()) return;
        char c = src_[i_];
        switch (c) {
            case '+': cur_ = {Tok::Plus, i_++}; return;
            case '-': cur_ = {Tok::Minus, i_++}; return;
            case '*': cur_ = {Tok::Star, i_++}; return;
            case '/': cur_ = {Tok::Slash, i_++}; return;
            case '^': cur_ = {Tok::Caret, i_++}; return;
            case '(': cur_ = {Tok::LParen, i_++}; return;
            case ')': cur_ = {Tok::RParen, i_++}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                ++i_;
            cur_ = {Tok::Ident, start};
            cur_.text = std::string(src_.substr(start, i_ - start));
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
    }

    void lex_number() {
        std::size_t start = i_;
        bool has_dot = false, has_exp = false;
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++i_;
            } else if (c == '.' && !has_dot && !has_exp) {
                has_dot = true;
                ++i_;
            } else if ((c == 'e' || c == 'E') && !has_exp && i_ > start) {
                has_exp = true;
                ++i_;
                if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            } else {
                break;
            }
        }
        std::string text(src_.substr(start, i_ - start));
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) throw SyntaxError("malformed number", start);
        cur_ = {Tok::Number, start};
        cur_.number = v;
        cur_.integral = !has_dot && !has_exp;
        cur_.text = std::move(text);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token cur_;
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars)
        : lex_(text), vars_(vars) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        if (lex_.peek().kind != Tok::End) throw SyntaxError("trailing input", lex_.peek().pos);
        return e;
    }

private:
    ExprPtr sum() {
        ExprPtr e = term();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                e = ast::add(std::move(e), term());
            } else if (k == Tok::Minus) {
                lex_.take();
                e = ast::sub(std::move(e), term());
            } else {
                return e;
            }
        }
    }

    // unary minus negates a whole product: -y/2 is -(y/2)
    ExprPtr term() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return ast::neg(term());
        }
        return product();
    }

    ExprPtr product() {
        ExprPtr e = power();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.take();
                e = ast::mul(std::move(e), power());
            } else if (k == Tok::Slash) {
                lex_.take();
                e = ast::div(std::move(e), power());
            } else {
                return e;
            }
        }
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            return ast::pow(std::move(base), exponent());
        }
        return base;
    }

    // exponent := ['-'] integer ['^' exponent], folded to a single int
    int exponent() {
        bool negate = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            negate = true;
        }
        Token t = lex_.peek();
        if (t.kind != Tok::Number || !t.integral) throw NonIntegerExponent(t.pos);
        lex_.take();
        long long v = llround(t.number);
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            int e = exponent();
            if (e < 0) throw NonIntegerExponent(t.pos);
            long long folded = 1;
            for (int i = 0; i < e; ++i) {
                folded *= v;
                if (folded > 1'000'000'000LL || folded < -1'000'000'000LL)
                    throw SyntaxError("exponent tower too large", t.pos);
            }
            v = folded;
        }
        if (v > 1'000'000'000LL || v < -1'000'000'000LL)
            throw SyntaxError("exponent too large", t.pos);
        return int(negate ? -v : v);
    }

    ExprPtr atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Number:
                lex_.take();
                return ast::lit(t.number);
            case Tok::LParen: {
                lex_.take();
                ExprPtr e = sum();
                if (lex_.peek().kind != Tok::RParen)
                    throw SyntaxError("expected ')'", lex_.peek().pos);
                lex_.take();
                return e;
            }
            case Tok::Ident: {
                lex_.take();
                if (t.text == "sin" || t.text == "cos" || t.text == "exp") return function(t);
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    if (vars_[i] == t.text) return ast::var(int(i), t.text);
                throw UnknownIdentifier(t.text, t.pos);
            }
            default:
                throw SyntaxError("expected a value", t.pos);
        }
    }

    ExprPtr function(const Token& name) {
        if (lex_.peek().kind != Tok::LParen)
            throw SyntaxError("expected '(' after " + name.text, lex_.peek().pos);
        lex_.take();
        ExprPtr arg = sum();
        if (lex_.peek().kind != Tok::RParen) throw SyntaxError("expected ')'", lex_.peek().pos);
        lex_.take();
        if (name.text == "sin") return ast::sin(std::move(arg));
        if (name.text == "cos") return ast::cos(std::move(arg));
        return ast::exp(std::move(arg));
    }

    Lexer lex_;
    const std::vector<std::string>& vars_;
};

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Neg: return 2;
        case ExprKind::Mul:
        case ExprKind::Div: return 3;
        case ExprKind::Pow: return 4;
        default: return 5;
    }
}

std::string print_literal(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print_node(const Expr& e, int parent_prec, bool right_child, std::string& out) {
    int prec = precedence(e.kind);
    bool parens = prec < parent_prec || (prec == parent_prec && right_child);
    if (parens) out += '(';
    switch (e.kind) {
        case ExprKind::Literal:
            out += print_literal(e.literal);
            break;
        case ExprKind::Var:
            out += e.var_name;
            break;
        case ExprKind::Neg:
            out += '-';
            print_node(*e.a, prec, false, out);
            break;
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Exp:
            out += e.kind == ExprKind::Sin ? "sin(" : e.kind == ExprKind::Cos ? "cos(" : "exp(";
            print_node(*e.a, 0, false, out);
            out += ')';
            break;
        case ExprKind::Add:
        case ExprKind::Sub:
            print_node(*e.a, prec, false, out);
            out += e.kind == ExprKind::Add ? " + " : " - ";
            print_node(*e.b, prec, true, out);
            break;
        case ExprKind::Mul:
        case ExprKind::Div:
            print_node(*e.a, prec, false, out);
            out += e.kind == ExprKind::Mul ? '*' : '/';
            print_node(*e.b, prec, true, out);
            break;
        case ExprKind::Pow:
            print_node(*e.a, prec + 1, false, out);  // bases bind atom-tight
            out += '^';
            if (e.exponent < 0) out += '-';
            out += std::to_string(std::abs(long(e.exponent)));
            break;
    }
    if (parens) out += ')';
}

}  // namespace

ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& vars) {
    return Parser(text, vars).parse();
}

std::string print_expr(const Expr& e) {
    std::string out;
    print_node(e, 0, false, out);
    return out;
}

bool expr_equal(const Expr& lhs, const Expr& rhs) {
    if (lhs.kind != rhs.kind) return false;
    switch (lhs.kind) {
        case ExprKind::Literal: return lhs.literal == rhs.literal;
        case ExprKind::Var: return lhs.var == rhs.var && lhs.var_name == rhs.var_name;
        case ExprKind::Neg:
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Exp: return expr_equal(*lhs.a, *rhs.a);
        case ExprKind::Pow: return lhs.exponent == rhs.exponent && expr_equal(*lhs.a, *rhs.a);
        default: return expr_equal(*lhs.a, *rhs.a) && expr_equal(*lhs.b, *rhs.b);
    }
}

}  // namespace osc
