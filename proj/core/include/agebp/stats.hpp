#pragma once

#include <cstddef>
#include <vector>

namespace agebp {

// sup_t |F_a(t) - F_b(t)| over two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic critical values of the two-sample statistic at the given level.
double ks_critical_two_sided(double level, std::size_t n, std::size_t m);
double ks_critical_one_sided(double level, std::size_t n, std::size_t m);

double median(std::vector<double> v);

}  // namespace agebp
