#include "selinf/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace selinf {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long e) {
    cpp_int r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::optional<Rational> parse_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }

    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string es = s.substr(epos + 1);
        s = s.substr(0, epos);
        if (es.empty()) return std::nullopt;
        bool eneg = false;
        if (es[0] == '+' || es[0] == '-') {
            eneg = es[0] == '-';
            es = es.substr(1);
        }
        if (!all_digits(es) || es.size() > 6) return std::nullopt;
        exp10 = std::stol(es);
        if (eneg) exp10 = -exp10;
    }

    std::string int_part = s, frac_part;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

    cpp_int digits = 0;
    for (char c : int_part + frac_part) digits = digits * 10 + (c - '0');
    if (neg) digits = -digits;

    long scale = static_cast<long>(frac_part.size()) - exp10;
    Rational r;
    if (scale >= 0)
        r = Rational(digits, pow10(scale));
    else
        r = Rational(digits * pow10(-scale), 1);
    return r;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return parse_decimal(text);

    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return *num / *den;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    auto parsed = parse_decimal(std::string(buf, res.ptr));
    if (!parsed) throw std::invalid_argument("rational_from_double: unparseable representation");
    return *parsed;
}

double to_double(const Rational& r) { return r.template convert_to<double>(); }

std::string rational_to_string(const Rational& r) {
    using boost::multiprecision::cpp_int;
    cpp_int num = numerator(r), den = denominator(r);
    if (den == 1) return num.str();

    cpp_int d = den;
    long twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return num.str() + "/" + den.str();

    long scale = std::max(twos, fives);
    cpp_int scaled = num * pow10(scale) / den;
    bool neg = scaled < 0;
    std::string digits = (neg ? cpp_int(-scaled) : scaled).str();
    if (static_cast<long>(digits.size()) <= scale)
        digits.insert(0, scale - digits.size() + 1, '0');
    digits.insert(digits.size() - scale, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (neg ? "-" : "") + digits;
}

}  // namespace selinf
