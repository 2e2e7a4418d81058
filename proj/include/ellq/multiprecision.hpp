#pragma once
// scalar_traits for Boost.Multiprecision complex types, so the templated kernel
// runs at extended precision (oracles, --precision-bits above 64).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "ellq/elliptic.hpp"

namespace ellq {

using mp_complex50 = boost::multiprecision::cpp_complex_50;
using mp_complex100 = boost::multiprecision::cpp_complex_100;

template <class Backend, boost::multiprecision::expression_template_option ET>
struct scalar_traits<boost::multiprecision::number<Backend, ET>> {
  using real = typename boost::multiprecision::component_type<
      boost::multiprecision::number<Backend, ET>>::type;
};

template <class C>
C to_mp(const cplx& z) {
  return C(real_t<C>(z.real()), real_t<C>(z.imag()));
}

template <class C>
cplx to_double(const C& z) {
  return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

}  // namespace ellq
