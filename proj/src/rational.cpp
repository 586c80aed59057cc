#include "aniso/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace aniso {

Rational rational_of(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_of: non-finite value");
    return Rational(x);  // exact for finite doubles
}

double to_double(const Rational& q) { return q.get_d(); }

Rational best_rational(const Rational& q, const mpz_class& max_den) {
    if (max_den < 1) throw std::invalid_argument("best_rational: max_den must be >= 1");
    if (q.get_den() <= max_den) return q;

    // Continued-fraction convergents h/k with the standard seeds
    // h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1. When the bound is hit,
    // the best semiconvergent competes with the last convergent.
    const bool negative = q < 0;
    const Rational target = negative ? Rational(-q) : q;
    mpz_class p = abs(q.get_num()), r = q.get_den();
    mpz_class h_pp = 0, h_p = 1;
    mpz_class k_pp = 1, k_p = 0;
    while (r != 0) {
        mpz_class a = p / r;
        mpz_class h = a * h_p + h_pp;
        mpz_class k = a * k_p + k_pp;
        if (k > max_den) {
            mpz_class t = (max_den - k_pp) / k_p;
            Rational semi(t * h_p + h_pp, t * k_p + k_pp);
            semi.canonicalize();
            Rational conv(h_p, k_p);
            conv.canonicalize();
            Rational best = (abs(semi - target) <= abs(conv - target)) ? semi : conv;
            return negative ? Rational(-best) : best;
        }
        h_pp = h_p;
        h_p = h;
        k_pp = k_p;
        k_p = k;
        mpz_class next = p - a * r;
        p = r;
        r = next;
    }
    Rational exact(h_p, k_p);
    exact.canonicalize();
    return negative ? Rational(-exact) : exact;
}

std::string to_fraction_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_fraction(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_fraction: empty string");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpz_class num(text.substr(0, slash), 10);
        mpz_class den(text.substr(slash + 1), 10);
        if (den == 0) throw std::invalid_argument("parse_fraction: zero denominator");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(mpz_class(text, 10));  // base fixed: "0125" is decimal here
    }
    // Decimal literal: digits.digits parsed exactly as num / 10^places.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t places = text.size() - dot - 1;
    mpz_class den = 1;
    for (std::size_t i = 0; i < places; ++i) den *= 10;
    Rational q(mpz_class(digits, 10), den);
    q.canonicalize();
    return q;
}

}  // namespace aniso
