#include "houin/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace houin {

namespace {

using Wide = __int128;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(Wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

static void reduce_into(Wide num, Wide den, std::int64_t& out_num, std::int64_t& out_den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        out_num = 0;
        out_den = 1;
        return;
    }
    Wide g = wide_gcd(num, den);
    out_num = narrow(num / g);
    out_den = narrow(den / g);
}

Rational::Rational(std::int64_t n, std::int64_t d) { reduce_into(n, d, num_, den_); }

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    Wide num = Wide(num_) * o.den_ + Wide(o.num_) * den_;
    Wide den = Wide(den_) * o.den_;
    reduce_into(num, den, num_, den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    Wide num = Wide(num_) * o.den_ - Wide(o.num_) * den_;
    Wide den = Wide(den_) * o.den_;
    reduce_into(num, den, num_, den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    Wide num = Wide(num_) * o.num_;
    Wide den = Wide(den_) * o.den_;
    reduce_into(num, den, num_, den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
    Wide num = Wide(num_) * o.den_;
    Wide den = Wide(den_) * o.num_;
    reduce_into(num, den, num_, den_);
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::fraction_str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational parse_rational(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty rational token");

    auto slash = token.find('/');
    if (slash != std::string::npos) {
        const std::string ns = token.substr(0, slash);
        const std::string ds = token.substr(slash + 1);
        if (ns.empty() || ds.empty()) throw std::invalid_argument("bad fraction: " + token);
        std::size_t np = 0, dp = 0;
        std::int64_t n = std::stoll(ns, &np);
        std::int64_t d = std::stoll(ds, &dp);
        if (np != ns.size() || dp != ds.size()) {
            throw std::invalid_argument("bad fraction: " + token);
        }
        if (d == 0) throw std::invalid_argument("zero denominator: " + token);
        return Rational(n, d);
    }

    auto dot = token.find('.');
    if (dot != std::string::npos) {
        std::string head = token.substr(0, dot);
        const std::string tail = token.substr(dot + 1);
        if (tail.empty() || tail.size() > 18) {
            throw std::invalid_argument("bad decimal: " + token);
        }
        bool negative = false;
        if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
            negative = head[0] == '-';
            head = head.substr(1);
        }
        if (head.empty()) head = "0";
        for (char c : head)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad decimal: " + token);
        for (char c : tail)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad decimal: " + token);

        std::int64_t scale = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
        std::int64_t whole = std::stoll(head);
        std::int64_t frac = std::stoll(tail);
        __int128 num = __int128(whole) * scale + frac;
        if (negative) num = -num;
        if (num > std::numeric_limits<std::int64_t>::max() ||
            num < std::numeric_limits<std::int64_t>::min()) {
            throw std::overflow_error("decimal overflow: " + token);
        }
        return Rational(static_cast<std::int64_t>(num), scale);
    }

    std::size_t pos = 0;
    std::int64_t n = std::stoll(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("bad integer: " + token);
    return Rational(n);
}

Rational parse_ratio(const std::string& token) {
    if (!token.empty() && token.back() == '%') {
        Rational v = parse_rational(token.substr(0, token.size() - 1));
        return v / Rational(100);
    }
    return parse_rational(token);
}

}  // namespace houin
