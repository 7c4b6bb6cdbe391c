#include "gmdet/expr.hpp"

#include <algorithm>
#include <cctype>

#include "gmdet/errors.hpp"

namespace gmdet {

namespace {

struct Lin {
    RF s;
    std::map<Var, RF> d;

    bool is_scalar() const { return d.empty(); }
};

void prune(std::map<Var, RF>& m) {
    for (auto it = m.begin(); it != m.end();) {
        if (it->second.is_zero()) it = m.erase(it);
        else ++it;
    }
}

Lin add(Lin a, const Lin& b, bool subtract) {
    if (subtract) a.s -= b.s;
    else a.s += b.s;
    for (const auto& [v, c] : b.d) {
        if (subtract) a.d[v] -= c;
        else a.d[v] += c;
    }
    prune(a.d);
    return a;
}

Lin scale(Lin a, const RF& c) {
    a.s *= c;
    for (auto& [v, x] : a.d) x *= c;
    prune(a.d);
    return a;
}

class Parser {
public:
    Parser(std::string_view text, const ParseContext& ctx) : text_(text), ctx_(ctx) {}

    Lin parse_all() {
        Lin v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::MalformedInput,
                    msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Lin expr() {
        Lin acc = term();
        while (true) {
            if (accept('+')) acc = add(std::move(acc), term(), false);
            else if (accept('-')) acc = add(std::move(acc), term(), true);
            else return acc;
        }
    }

    Lin term() {
        Lin acc = factor();
        while (true) {
            if (accept('*')) {
                Lin rhs = factor();
                if (acc.is_scalar()) acc = scale(std::move(rhs), acc.s);
                else if (rhs.is_scalar()) acc = scale(std::move(acc), rhs.s);
                else fail("product of two differentials");
            } else if (accept('/')) {
                Lin rhs = factor();
                if (!rhs.is_scalar()) fail("division by a differential");
                if (rhs.s.is_zero()) fail("division by zero");
                acc = scale(std::move(acc), rhs.s.inverse());
            } else {
                return acc;
            }
        }
    }

    Lin factor() {
        if (accept('-')) return scale(factor(), RF(-1));
        if (accept('+')) return factor();
        Lin b = base();
        if (accept('^')) {
            long e = exponent();
            if (!b.is_scalar()) fail("power of a differential");
            if (e < 0 && b.s.is_zero()) fail("negative power of zero");
            b.s = b.s.pow(e);
        }
        return b;
    }

    long exponent() {
        bool paren = accept('(');
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ - start > 6) fail("exponent too large");
        long e = std::stol(std::string(text_.substr(start, pos_ - start)));
        if (paren && !accept(')')) fail("expected ')'");
        return neg ? -e : e;
    }

    Lin base() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Lin v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            Lin v;
            v.s = RF(Rational(mpz_class(std::string(text_.substr(start, pos_ - start)))));
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (name == "d" && peek() == '(') {
                ++pos_;
                Lin inner = expr();
                if (!accept(')')) fail("expected ')'");
                if (!inner.is_scalar()) fail("d applied to a differential");
                Lin v;
                v.d = total_differential(inner.s, ctx_.differentials);
                return v;
            }
            if (auto val = ctx_.lookup(name)) {
                Lin v;
                v.s = *val;
                return v;
            }
            if (name.size() > 1 && name[0] == 'd') {
                Var x = intern(name.substr(1));
                if (std::find(ctx_.differentials.begin(), ctx_.differentials.end(), x) != ctx_.differentials.end()) {
                    Lin v;
                    v.d[x] = RF(1);
                    return v;
                }
                if (ctx_.lookup(name.substr(1))) {
                    // differential of a symbolic constant
                    return Lin{};
                }
            }
            fail("unknown identifier '" + name + "'");
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const ParseContext& ctx_;
    std::size_t pos_ = 0;
};

}  // namespace

std::map<Var, RF> total_differential(const RF& f, const std::vector<Var>& vars) {
    std::map<Var, RF> out;
    for (Var v : vars) {
        RF c = f.derivative(v);
        if (!c.is_zero()) out[v] = c;
    }
    return out;
}

ParseContext tower_context(const ScalarTower& tower) {
    ParseContext ctx;
    ScalarTower t = tower;
    ctx.lookup = [t](std::string_view name) -> std::optional<RF> {
        Var v = intern(name);
        if (v == t.fiber || t.is_base(v) || t.is_param(v)) return RF::var(v);
        if (t.ext && v == t.ext->gen) return RF::generator(t.ext);
        return std::nullopt;
    };
    ctx.differentials.push_back(tower.fiber);
    ctx.differentials.insert(ctx.differentials.end(), tower.base_vars.begin(), tower.base_vars.end());
    return ctx;
}

ParseContext free_context() {
    ParseContext ctx;
    ctx.lookup = [](std::string_view name) -> std::optional<RF> { return RF::var(name); };
    return ctx;
}

RF parse_rf(std::string_view text, const ParseContext& ctx) {
    Lin v = Parser(text, ctx).parse_all();
    if (!v.is_scalar()) throw Error(ErrorKind::MalformedInput, "expected a scalar, got a form: " + std::string(text));
    return v.s;
}

std::map<Var, RF> parse_form(std::string_view text, const ParseContext& ctx) {
    Lin v = Parser(text, ctx).parse_all();
    if (!v.s.is_zero()) throw Error(ErrorKind::MalformedInput, "expected a 1-form, got a scalar: " + std::string(text));
    return v.d;
}

}  // namespace gmdet
