#include "wkz/phi.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "wkz/errors.hpp"
#include "wkz/io.hpp"

namespace wkz {

struct PhiSpec::Node {
    enum Kind { Id, Pow, Log1pK, Expm1K, ScaleK, Prod } kind = Id;
    double param = 0.0;
    std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const PhiSpec::Node>;

static NodePtr id_node() {
    static const NodePtr id = std::make_shared<PhiSpec::Node>();
    return id;
}

static NodePtr make(PhiSpec::Node::Kind k, double param, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<PhiSpec::Node>();
    n->kind = k;
    n->param = param;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

static double eval(const PhiSpec::Node* n, double u) {
    switch (n->kind) {
    case PhiSpec::Node::Id: return u;
    case PhiSpec::Node::Pow: return std::pow(eval(n->a.get(), u), n->param);
    case PhiSpec::Node::Log1pK: return std::log1p(eval(n->a.get(), u));
    case PhiSpec::Node::Expm1K: return std::expm1(eval(n->a.get(), u));
    case PhiSpec::Node::ScaleK: return n->param * eval(n->a.get(), u);
    case PhiSpec::Node::Prod: return eval(n->a.get(), u) * eval(n->b.get(), u);
    }
    return u;
}

static NodePtr subst(const NodePtr& n, const NodePtr& repl) {
    if (n->kind == PhiSpec::Node::Id) return repl;
    return make(n->kind, n->param, subst(n->a, repl),
                n->b ? subst(n->b, repl) : nullptr);
}

static std::string render(const PhiSpec::Node* n) {
    auto arg = [](const PhiSpec::Node* c) {
        std::string s = render(c);
        if (c->kind == PhiSpec::Node::Id) return s;
        return "(" + s + ")";
    };
    switch (n->kind) {
    case PhiSpec::Node::Id: return "u";
    case PhiSpec::Node::Pow:
        if (n->param == 0.5) return "sqrt(" + render(n->a.get()) + ")";
        return arg(n->a.get()) + "^" + fmt_double(n->param);
    case PhiSpec::Node::Log1pK: return "log1p(" + render(n->a.get()) + ")";
    case PhiSpec::Node::Expm1K: return "expm1(" + render(n->a.get()) + ")";
    case PhiSpec::Node::ScaleK: return fmt_double(n->param) + "*" + arg(n->a.get());
    case PhiSpec::Node::Prod: return render(n->a.get()) + "*" + render(n->b.get());
    }
    return "u";
}

PhiSpec PhiSpec::identity() { return PhiSpec(id_node()); }

PhiSpec PhiSpec::power(double beta) {
    if (!(beta > 0.0)) throw ConfigError("gauge power: exponent must be > 0");
    return PhiSpec(make(Node::Pow, beta, id_node()));
}

PhiSpec PhiSpec::log1p_gauge() { return PhiSpec(make(Node::Log1pK, 0.0, id_node())); }
PhiSpec PhiSpec::expm1_gauge() { return PhiSpec(make(Node::Expm1K, 0.0, id_node())); }

PhiSpec PhiSpec::scale(double a) {
    if (!(a > 0.0)) throw ConfigError("gauge scale: factor must be > 0");
    return PhiSpec(make(Node::ScaleK, a, id_node()));
}

PhiSpec PhiSpec::compose(const PhiSpec& inner) const {
    NodePtr self = root_ ? root_ : id_node();
    NodePtr in = inner.root_ ? inner.root_ : id_node();
    return PhiSpec(subst(self, in));
}

PhiSpec PhiSpec::product(const PhiSpec& other) const {
    return PhiSpec(make(Node::Prod, 0.0, root_ ? root_ : id_node(),
                        other.root_ ? other.root_ : id_node()));
}

double PhiSpec::operator()(double u) const {
    return eval(root_ ? root_.get() : id_node().get(), u);
}

std::string PhiSpec::str() const { return render(root_ ? root_.get() : id_node().get()); }

bool PhiSpec::verify_gauge() const {
    if ((*this)(0.0) != 0.0) return false;
    double prev = 0.0;
    for (int k = -60; k <= 60; ++k) {
        double v = (*this)(std::ldexp(1.0, k));
        if (std::isnan(v) || v < 0.0) return false;
        if (v < prev * (1.0 - 1e-12)) return false;
        prev = std::max(prev, v);
    }
    return true;
}

namespace {

// c * n(u); n empty means a bare constant
struct Val {
    double c = 1.0;
    NodePtr n;
};

struct Parser {
    const std::string& s;
    size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(uint8_t(s[i]))) ++i;
    }
    bool eat(char ch) {
        ws();
        if (i < s.size() && s[i] == ch) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ConfigError("gauge expression: " + msg + " at offset " + std::to_string(i));
    }

    double number() {
        ws();
        const char* start = s.c_str() + i;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        if (end == start) fail("expected a number");
        i += size_t(end - start);
        return v;
    }

    std::string ident() {
        ws();
        size_t start = i;
        while (i < s.size() && (std::isalnum(uint8_t(s[i])) || s[i] == '_')) ++i;
        return s.substr(start, i - start);
    }

    Val factor() {
        ws();
        if (i >= s.size()) fail("unexpected end");
        char ch = s[i];
        if (std::isdigit(uint8_t(ch)) || ch == '.') return {number(), nullptr};
        if (ch == '(') {
            ++i;
            Val v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isalpha(uint8_t(ch))) {
            std::string name = ident();
            if (name == "u") return {1.0, id_node()};
            NodePtr arg = id_node();
            if (eat('(')) {
                Val inner = expr();
                arg = close(inner);
                if (!eat(')')) fail("expected ')'");
            }
            if (name == "sqrt") return {1.0, make(PhiSpec::Node::Pow, 0.5, arg)};
            if (name == "log1p") return {1.0, make(PhiSpec::Node::Log1pK, 0.0, arg)};
            if (name == "expm1") return {1.0, make(PhiSpec::Node::Expm1K, 0.0, arg)};
            fail("unknown function '" + name + "'");
        }
        fail("unexpected character");
    }

    Val term() {
        Val v = factor();
        ws();
        if (eat('^')) {
            double e = number();
            if (!v.n) {
                v.c = std::pow(v.c, e);
            } else {
                if (!(e > 0.0)) fail("exponent must be > 0");
                v.n = make(PhiSpec::Node::Pow, e, close(v));
                v.c = 1.0;
            }
        }
        return v;
    }

    Val expr() {
        Val acc = term();
        while (true) {
            ws();
            if (!eat('*')) break;
            Val t = term();
            acc.c *= t.c;
            if (acc.n && t.n)
                acc.n = make(PhiSpec::Node::Prod, 0.0, acc.n, t.n);
            else if (!acc.n)
                acc.n = t.n;
        }
        return acc;
    }

    // materialize the pending scale factor
    NodePtr close(const Val& v) {
        if (!v.n) fail("a bare constant is not a gauge");
        if (v.c == 1.0) return v.n;
        if (!(v.c > 0.0)) fail("scale factor must be > 0");
        return make(PhiSpec::Node::ScaleK, v.c, v.n);
    }
};

} // namespace

PhiSpec PhiSpec::parse(const std::string& expr) {
    Parser p{expr};
    Val v = p.expr();
    p.ws();
    if (p.i != expr.size()) p.fail("trailing input");
    NodePtr n = p.close(v);
    return PhiSpec(std::move(n));
}

} // namespace wkz
