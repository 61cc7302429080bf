#include "qsc/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsc {

struct Expr::Node {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Ln };
    Op op;
    double c = 0.0;
    std::string name;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using P = std::shared_ptr<const Node>;

P mk_const(double c) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Const;
    n->c = c;
    return n;
}

P mk_var(std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Var;
    n->name = std::move(name);
    return n;
}

P mk(Node::Op op, P a, P b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const P& n, double v) { return n->op == Node::Op::Const && n->c == v; }

// light simplification so differentiated trees stay readable
P add(P a, P b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->op == Node::Op::Const && b->op == Node::Op::Const) return mk_const(a->c + b->c);
    return mk(Node::Op::Add, std::move(a), std::move(b));
}
P sub(P a, P b) {
    if (is_const(b, 0.0)) return a;
    if (a->op == Node::Op::Const && b->op == Node::Op::Const) return mk_const(a->c - b->c);
    return mk(Node::Op::Sub, std::move(a), std::move(b));
}
P mul(P a, P b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return mk_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->op == Node::Op::Const && b->op == Node::Op::Const) return mk_const(a->c * b->c);
    return mk(Node::Op::Mul, std::move(a), std::move(b));
}
P divide(P a, P b) {
    if (is_const(a, 0.0)) return mk_const(0.0);
    if (is_const(b, 1.0)) return a;
    return mk(Node::Op::Div, std::move(a), std::move(b));
}

cplx eval_node(const Node* n, const Expr::Env& env) {
    switch (n->op) {
        case Node::Op::Const: return {n->c, 0.0};
        case Node::Op::Var: {
            auto it = env.find(n->name);
            if (it == env.end()) throw std::invalid_argument("expr: unbound variable '" + n->name + "'");
            return it->second;
        }
        case Node::Op::Add: return eval_node(n->a.get(), env) + eval_node(n->b.get(), env);
        case Node::Op::Sub: return eval_node(n->a.get(), env) - eval_node(n->b.get(), env);
        case Node::Op::Mul: return eval_node(n->a.get(), env) * eval_node(n->b.get(), env);
        case Node::Op::Div: return eval_node(n->a.get(), env) / eval_node(n->b.get(), env);
        case Node::Op::Pow: {
            const cplx base = eval_node(n->a.get(), env), e = eval_node(n->b.get(), env);
            if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64.0) {
                // integer powers avoid the pow branch cut for negative bases
                cplx r{1.0, 0.0};
                long m = std::lround(e.real());
                cplx x = m < 0 ? 1.0 / base : base;
                for (long i = 0; i < std::abs(m); ++i) r *= x;
                return r;
            }
            return std::pow(base, e);
        }
        case Node::Op::Neg: return -eval_node(n->a.get(), env);
        case Node::Op::Sin: return std::sin(eval_node(n->a.get(), env));
        case Node::Op::Cos: return std::cos(eval_node(n->a.get(), env));
        case Node::Op::Exp: return std::exp(eval_node(n->a.get(), env));
        case Node::Op::Ln: return std::log(eval_node(n->a.get(), env));
    }
    throw std::logic_error("unreachable");
}

P diff_node(const P& n, const std::string& var) {
    switch (n->op) {
        case Node::Op::Const: return mk_const(0.0);
        case Node::Op::Var: return mk_const(n->name == var ? 1.0 : 0.0);
        case Node::Op::Add: return add(diff_node(n->a, var), diff_node(n->b, var));
        case Node::Op::Sub: return sub(diff_node(n->a, var), diff_node(n->b, var));
        case Node::Op::Mul:
            return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
        case Node::Op::Div:
            return divide(sub(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var))),
                          mk(Node::Op::Pow, n->b, mk_const(2.0)));
        case Node::Op::Pow: {
            if (n->b->op == Node::Op::Const) {
                const double e = n->b->c;
                return mul(mul(mk_const(e), mk(Node::Op::Pow, n->a, mk_const(e - 1.0))),
                           diff_node(n->a, var));
            }
            // u^v = exp(v ln u)
            const P as_exp = mk(Node::Op::Exp, mul(n->b, mk(Node::Op::Ln, n->a)));
            return diff_node(as_exp, var);
        }
        case Node::Op::Neg: return mk(Node::Op::Neg, diff_node(n->a, var));
        case Node::Op::Sin: return mul(mk(Node::Op::Cos, n->a), diff_node(n->a, var));
        case Node::Op::Cos: return mk(Node::Op::Neg, mul(mk(Node::Op::Sin, n->a), diff_node(n->a, var)));
        case Node::Op::Exp: return mul(mk(Node::Op::Exp, n->a), diff_node(n->a, var));
        case Node::Op::Ln: return divide(diff_node(n->a, var), n->a);
    }
    throw std::logic_error("unreachable");
}

std::string str_node(const Node* n) {
    switch (n->op) {
        case Node::Op::Const: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", n->c);
            return buf;
        }
        case Node::Op::Var: return n->name;
        case Node::Op::Add: return "(" + str_node(n->a.get()) + " + " + str_node(n->b.get()) + ")";
        case Node::Op::Sub: return "(" + str_node(n->a.get()) + " - " + str_node(n->b.get()) + ")";
        case Node::Op::Mul: return "(" + str_node(n->a.get()) + " * " + str_node(n->b.get()) + ")";
        case Node::Op::Div: return "(" + str_node(n->a.get()) + " / " + str_node(n->b.get()) + ")";
        case Node::Op::Pow: return "(" + str_node(n->a.get()) + " ^ " + str_node(n->b.get()) + ")";
        case Node::Op::Neg: return "(-" + str_node(n->a.get()) + ")";
        case Node::Op::Sin: return "sin(" + str_node(n->a.get()) + ")";
        case Node::Op::Cos: return "cos(" + str_node(n->a.get()) + ")";
        case Node::Op::Exp: return "exp(" + str_node(n->a.get()) + ")";
        case Node::Op::Ln: return "ln(" + str_node(n->a.get()) + ")";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(const std::string& src) : s_(src) {}

    P parse() {
        P e = expression();
        skip_ws();
        if (pos_ != s_.size())
            throw std::invalid_argument("expr: unexpected input at position " + std::to_string(pos_));
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw std::invalid_argument(std::string("expr: expected '") + c + "' at position " +
                                        std::to_string(pos_));
    }

    P expression() {
        P e = term();
        for (;;) {
            if (accept('+')) e = add(e, term());
            else if (accept('-')) e = sub(e, term());
            else return e;
        }
    }
    P term() {
        P e = factor();
        for (;;) {
            if (accept('*')) e = mul(e, factor());
            else if (accept('/')) e = divide(e, factor());
            else return e;
        }
    }
    P factor() {  // right-associative power binds tighter than unary minus here
        if (accept('-')) return mk(Node::Op::Neg, factor());
        P base = atom();
        if (accept('^')) return mk(Node::Op::Pow, base, factor());
        return base;
    }
    P atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw std::invalid_argument("expr: unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            P e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw std::invalid_argument("expr: unexpected character '" + std::string(1, c) +
                                    "' at position " + std::to_string(pos_));
    }
    P number() {
        std::size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                s_[end] == 'e' || s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
            ++end;
        const std::string tok = s_.substr(pos_, end - pos_);
        try {
            const double v = std::stod(tok);
            pos_ = end;
            return mk_const(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("expr: bad numeric literal '" + tok + "'");
        }
    }
    P identifier() {
        std::size_t end = pos_;
        while (end < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
            ++end;
        std::string name = s_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "pi") return mk_const(M_PI);
        if (accept('(')) {
            if (name == "pow") {
                P x = expression();
                expect(',');
                P y = expression();
                expect(')');
                return mk(Node::Op::Pow, std::move(x), std::move(y));
            }
            P arg = expression();
            expect(')');
            if (name == "sin") return mk(Node::Op::Sin, std::move(arg));
            if (name == "cos") return mk(Node::Op::Cos, std::move(arg));
            if (name == "exp") return mk(Node::Op::Exp, std::move(arg));
            if (name == "ln" || name == "log") return mk(Node::Op::Ln, std::move(arg));
            throw std::invalid_argument("expr: unknown function '" + name + "'");
        }
        return mk_var(std::move(name));
    }
};

}  // namespace

Expr Expr::parse(const std::string& src) { return Expr(Parser(src).parse()); }
Expr Expr::constant(double c) { return Expr(mk_const(c)); }
Expr Expr::variable(const std::string& name) { return Expr(mk_var(name)); }

cplx Expr::eval(const Env& env) const { return eval_node(root_.get(), env); }
Expr Expr::diff(const std::string& var) const { return Expr(diff_node(root_, var)); }
std::string Expr::str() const { return str_node(root_.get()); }

}  // namespace qsc
