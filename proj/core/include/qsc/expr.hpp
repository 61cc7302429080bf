#pragma once

#include <map>
#include <memory>
#include <string>

#include "qsc/grid.hpp"

namespace qsc {

/// Closed-form expressions over named variables, with exact differentiation.
/// Grammar: + - * / ^, unary minus, parentheses, numeric literals, variables,
/// and the calls sin, cos, exp, ln, pow(x, y). Evaluation is complex-valued
/// so the velocity slot of a Lagrangian can carry scale derivatives.
class Expr {
public:
    using Env = std::map<std::string, cplx>;

    static Expr parse(const std::string& src);
    static Expr constant(double c);
    static Expr variable(const std::string& name);

    cplx eval(const Env& env) const;
    Expr diff(const std::string& var) const;
    std::string str() const;

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace qsc
