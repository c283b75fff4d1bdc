#pragma once

// Gauge functions for the strong means: continuous, increasing, 0 at 0.
// Expression tree over {identity, power(beta>0), log1p, expm1, scale(a>0),
// composition, product}; every node preserves the gauge class, so validity
// is by construction.  Parsed from strings like "u*log1p(u)" or "sqrt".

#include <memory>
#include <string>

namespace wkz {

class PhiSpec {
public:
    PhiSpec() = default; // identity

    static PhiSpec identity();
    static PhiSpec power(double beta);      // u^beta, beta > 0
    static PhiSpec log1p_gauge();
    static PhiSpec expm1_gauge();
    static PhiSpec scale(double a);         // a*u, a > 0

    // this(inner(u))
    PhiSpec compose(const PhiSpec& inner) const;
    // pointwise product; both factors gauges
    PhiSpec product(const PhiSpec& other) const;

    // expr := term ('*' term)*; term := factor ('^' num)?;
    // factor := num | 'u' | sqrt|log1p|expm1 '(' expr ')' | '(' expr ')';
    // a leading numeric term acts as scale(a).  Bare "sqrt" etc. = func(u).
    static PhiSpec parse(const std::string& expr);

    double operator()(double u) const;      // +inf on overflow
    std::string str() const;

    // Samples a geometric grid and confirms monotone nondecreasing, 0 at 0.
    bool verify_gauge() const;

    struct Node; // expression tree, defined in the .cpp

private:
    std::shared_ptr<const Node> root_;
    explicit PhiSpec(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
};

} // namespace wkz
