#pragma once

#include <cmath>
#include <complex>

namespace darboux::specfun {

// Sign plus natural log of the magnitude. sign == 0 means exactly zero and
// log_mag is then meaningless.
struct ScaledValue {
    int sign = 0;
    double log_mag = 0.0;

    static ScaledValue zero() { return {0, 0.0}; }
    static ScaledValue one() { return {1, 0.0}; }
    static ScaledValue from_real(double x);
    static ScaledValue from_log(double log_mag, int sign = 1) { return {sign, log_mag}; }

    double to_real() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    bool is_zero() const { return sign == 0; }

    ScaledValue operator*(const ScaledValue& o) const;
    ScaledValue operator/(const ScaledValue& o) const;
    ScaledValue pow(int k) const;
    ScaledValue pow(double a) const;  // only for positive values
};

double hermite(int n, double x);
ScaledValue hermite_scaled(int n, double x);

double log_gamma(double x);
double log_factorial(int n);
ScaledValue pochhammer(double z, int a);
double log_binomial(double a, double b);  // ln C(a, b) for a >= b >= 0 real
double binomial(int n, int k);

double upper_incomplete_gamma(double s, double x);
double dawson(double x);
long double dawson(long double x);

}  // namespace darboux::specfun
