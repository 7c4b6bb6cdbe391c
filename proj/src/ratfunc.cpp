#include "gmdet/ratfunc.hpp"

#include "gmdet/errors.hpp"

namespace gmdet {

ExtPtr make_extension(std::string_view gen, const Poly& square) {
    Var w = intern(gen);
    if (square.is_zero()) throw Error(ErrorKind::MalformedInput, "extension square must be nonzero");
    if (square.contains(w)) throw Error(ErrorKind::MalformedInput, "extension square involves its generator");
    return std::make_shared<const Extension>(Extension{w, square});
}

ExtPtr common_extension(const ExtPtr& a, const ExtPtr& b) {
    if (!a) return b;
    if (!b || a == b) return a;
    if (a->gen == b->gen && a->square == b->square) return a;
    throw Error(ErrorKind::MalformedInput, "mixing elements of different quadratic extensions");
}

RationalFunction::RationalFunction(const Poly& num, const Poly& den) : p_(num), d_(den) { normalize(); }

RationalFunction RationalFunction::make(Poly p, Poly q, Poly d, ExtPtr ext) {
    RationalFunction r;
    r.p_ = std::move(p);
    r.q_ = std::move(q);
    r.d_ = std::move(d);
    r.ext_ = std::move(ext);
    if (!r.q_.is_zero() && !r.ext_) throw Error(ErrorKind::Precondition, "irrational part without extension");
    r.normalize();
    return r;
}

RationalFunction RationalFunction::generator(const ExtPtr& ext) { return make(Poly(), Poly(1), Poly(1), ext); }

void RationalFunction::normalize() {
    if (d_.is_zero()) throw Error(ErrorKind::MalformedInput, "zero denominator");
    if (q_.is_zero()) ext_.reset();
    if (p_.is_zero() && q_.is_zero()) {
        d_ = Poly(1);
        return;
    }
    if (!d_.is_constant()) {
        Poly g = q_.is_zero() ? gcd(p_, d_) : gcd(gcd(p_, q_), d_);
        if (!g.is_constant()) {
            p_ = divide_exact(p_, g);
            if (!q_.is_zero()) q_ = divide_exact(q_, g);
            d_ = divide_exact(d_, g);
        }
    }
    Rational lc = d_.lc();
    if (lc != 1) {
        Rational inv = 1 / lc;
        p_ *= inv;
        q_ *= inv;
        d_ *= inv;
    }
}

bool RationalFunction::is_one() const { return is_constant() && p_.constant_value() == 1; }

Rational RationalFunction::constant_value() const {
    if (!is_constant()) throw Error(ErrorKind::Precondition, "not a constant: " + to_string());
    return p_.constant_value();
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.p_ = -r.p_;
    r.q_ = -r.q_;
    return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    ext_ = common_extension(ext_, o.ext_);
    if (d_ == o.d_) {
        p_ += o.p_;
        q_ += o.q_;
        if (!d_.is_constant()) normalize();
        else if (q_.is_zero()) ext_.reset();
        return *this;
    }
    Poly g = gcd(d_, o.d_);
    Poly a = divide_exact(o.d_, g), b = divide_exact(d_, g);
    p_ = p_ * a + o.p_ * b;
    q_ = q_ * a + o.q_ * b;
    d_ = d_ * a;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    if (is_zero() || o.is_zero()) return *this = RationalFunction();
    ExtPtr ext = common_extension(ext_, o.ext_);
    if (o.is_constant()) {
        Rational c = o.p_.constant_value();
        p_ *= c;
        q_ *= c;
        return *this;
    }
    Poly np = p_ * o.p_, nq;
    if (!q_.is_zero() && !o.q_.is_zero()) np += q_ * o.q_ * ext->square;
    if (!q_.is_zero() || !o.q_.is_zero()) nq = p_ * o.q_ + q_ * o.p_;
    p_ = std::move(np);
    q_ = std::move(nq);
    d_ = d_ * o.d_;
    ext_ = ext;
    normalize();
    return *this;
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw Error(ErrorKind::Domain, "division by zero");
    if (q_.is_zero()) return RationalFunction(d_, p_);
    Poly n = p_ * p_ - q_ * q_ * ext_->square;
    if (n.is_zero()) throw Error(ErrorKind::Domain, "extension square is a perfect square");
    return make(d_ * p_, -(d_ * q_), n, ext_);
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) { return *this *= o.inverse(); }

RationalFunction RationalFunction::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RationalFunction result(1), base = *this;
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

RationalFunction RationalFunction::conjugate() const {
    RationalFunction r = *this;
    r.q_ = -r.q_;
    return r;
}

RationalFunction RationalFunction::norm() const { return *this * conjugate(); }

RationalFunction RationalFunction::derivative(Var v) const {
    Poly dp = p_.derivative(v), dd = d_.derivative(v);
    if (q_.is_zero()) {
        if (dd.is_zero()) return RationalFunction(dp, d_);
        return RationalFunction(dp * d_ - p_ * dd, d_ * d_);
    }
    const Poly& s = ext_->square;
    Poly ds = s.derivative(v), dq = q_.derivative(v);
    Poly two_s = s * Rational(2);
    return make((dp * d_ - p_ * dd) * two_s, (dq * d_ - q_ * dd) * two_s + q_ * d_ * ds, two_s * d_ * d_, ext_);
}

namespace {

RationalFunction horner(const Poly& p, Var v, const RationalFunction& value) {
    if (!p.contains(v)) return p;
    auto cs = p.coeffs(v);
    RationalFunction acc;
    for (std::size_t k = cs.size(); k-- > 0;) acc = acc * value + RationalFunction(cs[k]);
    return acc;
}

}  // namespace

RationalFunction RationalFunction::substitute(Var v, const RationalFunction& value) const {
    if (!contains(v)) return *this;
    if (ext_ && ext_->square.contains(v))
        throw Error(ErrorKind::Precondition, "cannot substitute a variable of the extension square");
    RationalFunction num = horner(p_, v, value);
    if (!q_.is_zero()) num += horner(q_, v, value) * generator(ext_);
    return num / horner(d_, v, value);
}

bool RationalFunction::operator==(const RationalFunction& o) const {
    if (!(p_ == o.p_) || !(q_ == o.q_) || !(d_ == o.d_)) return false;
    if (q_.is_zero()) return true;
    return ext_ == o.ext_ || (ext_->gen == o.ext_->gen && ext_->square == o.ext_->square);
}

namespace {

bool is_atom(const Poly& d) {
    if (d.is_constant()) return d.constant_value().get_den() == 1 && d.constant_value() > 0;
    if (!d.is_monomial() || d.lc() != 1) return false;
    int count = 0;
    d.leading().mono.for_each([&](Var, std::uint32_t) { ++count; });
    return count == 1;
}

}  // namespace

std::string RationalFunction::to_string() const {
    Poly num = p_;
    if (!q_.is_zero()) num += q_ * Poly::var(ext_->gen);
    if (d_.is_constant() && d_.constant_value() == 1) return num.to_string();
    std::string n = num.to_string();
    if (num.size() > 1) n = "(" + n + ")";
    std::string d = d_.to_string();
    if (!is_atom(d_)) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace gmdet
