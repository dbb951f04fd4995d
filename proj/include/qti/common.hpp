#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace qti {

// Error taxonomy shared by all modules.  Codes map to CLI exit semantics:
// invalid input -> 2, verification failure -> 1.
enum class Err {
    OrderMismatch,        // mixing incompatible root-of-unity orders
    EvenLevel,            // level n must be odd
    UndefinedLink,        // (0,0) has no primitive part
    NotDegenerate,        // subrep decomposition needs u,v = +-1
    TooSmall,             // n below the minimum for the requested operation
    InvalidWeightSystem,  // weight vector inconsistent with its defining data
    NotInvariant,         // character is not fixed by the mapping class
    NotCoprime,           // closed-form trace needs gcd(b,n) = 1
    TooLarge,             // exact-mode size cap exceeded
    NotPeriodic,          // mapping class has infinite order
    ShadowFailure,        // classical-shadow identity failed to hold
    InvalidArgument,      // malformed input (CLI or API)
};

const char* err_name(Err code);

struct Error : std::runtime_error {
    Err code;
    Error(Err c, const std::string& msg)
        : std::runtime_error(std::string(err_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Err code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

// Floor-modulus: result always in [0, m) for m > 0.
inline long long mod_floor(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

// Reduced fraction num/den with den > 0.  Used for rational angles
// (a fraction p/r denotes the angle 2*pi*p/r).
struct Fraction {
    long long num = 0;
    long long den = 1;

    Fraction() = default;
    Fraction(long long n, long long d) : num(n), den(d) {
        if (den == 0) fail(Err::InvalidArgument, "fraction with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    Fraction operator+(const Fraction& o) const {
        return Fraction(num * o.den + o.num * den, den * o.den);
    }
    Fraction operator-(const Fraction& o) const {
        return Fraction(num * o.den - o.num * den, den * o.den);
    }
    Fraction operator*(const Fraction& o) const { return Fraction(num * o.num, den * o.den); }
    Fraction operator-() const { return Fraction(-num, den); }
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
    bool is_integer() const { return den == 1; }

    // Representative with num reduced mod den, i.e. the angle folded into [0, 2*pi).
    Fraction folded() const { return Fraction(mod_floor(num, den), den); }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace qti
