// Exact Haar integrals of cylinder functions on the m = 2, N = 1 group.

#include <iostream>

#include "mhg/haar.hpp"

using namespace mhg;

int main()
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 4);

  // f(x, s) = x mod 2 + (s mod 4) / 4, a function on G / G_1.
  auto f = CylinderFunction::tabulate(ctx, ChainFamily::G, 1, [](const HPoint& g) {
    return Rational(g.x[0].value() % 2) + Rational(g.s.value() % 4, 4);
  });

  CosetReps reps = enumerate_cosets(ctx, ChainFamily::G, 1);
  std::cout << reps.reps.size() << " cosets of G_1\n";
  for (std::size_t i = 0; i < reps.reps.size(); ++i) {
    const HPoint& a = reps.reps[i];
    std::cout << "  (" << a.x[0].value() << ", " << a.s.value() << ") -> " << to_string(f.table()[i]) << "\n";
  }

  Rational total = integrate(ctx, f);
  std::cout << "I(f)            = " << to_string(total) << " ~ " << to_decimal(total, 6) << "\n";
  std::cout << "I(f) at level 2 = " << to_string(integrate(ctx, f, 2)) << "\n";

  HPoint a = ctx.point({1}, 3);
  std::cout << "I(f(a .))       = " << to_string(integrate(ctx, translate(ctx, f, a, Side::Left))) << "\n";
  std::cout << "I(f(. a))       = " << to_string(integrate(ctx, translate(ctx, f, a, Side::Right))) << "\n";
  std::cout << "I(1_{G_1})      = " << to_string(integrate(ctx, CylinderFunction::identity_indicator(ctx, ChainFamily::G, 1)))
            << "\n";
}
