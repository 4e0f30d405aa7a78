#pragma once

namespace agebp {

// log Gamma(x - a) - log Gamma(x), accurate for large x where plain lgamma
// differences lose all digits.
long double log_gamma_ratio(long double x, long double a);

// log(exp(a) + exp(b)) without overflow.
long double log_add(long double a, long double b);

}  // namespace agebp
