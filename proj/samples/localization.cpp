// Rings of fractions over Z and Z/6, and the Heisenberg group over Z[1/2].

#include <iostream>
#include <string>

#include "mhg/fractions.hpp"

using namespace mhg;

static std::string show(const Fraction& p)
{
  return to_string(p.num) + "/" + to_string(p.den);
}

int main()
{
  Localization dyadic(BaseRing::integers(), MultSet::generated({2}));
  Fraction p = dyadic.make(3, 4), q = dyadic.make(5, 8);
  std::cout << "over Z[1/2]:\n";
  std::cout << "  " << show(p) << " + " << show(q) << " = " << show(dyadic.add(p, q)) << "\n";
  std::cout << "  " << show(p) << " * " << show(q) << " = " << show(dyadic.mul(p, q)) << "\n";
  std::cout << "  6/8 == 3/4: " << std::boolalpha << dyadic.equal(dyadic.make(6, 8), p) << "\n";

  Localization z6(BaseRing::integers_mod(6), MultSet::generated({3}));
  std::cout << "over Z/6 with S = {1, 3}:\n";
  std::cout << "  2/1 == 0/1: " << z6.equal(z6.make(2, 1), z6.make(0, 1)) << "\n";
  for (int a = 0; a < 6; ++a) {
    auto w = z6.kernel_witness(a);
    std::cout << "  " << a << "/1 " << (w ? "vanishes, killed by " + to_string(*w) : std::string("survives")) << "\n";
  }

  BilinearForm b{{0, 1}, {-1, 0}};
  FractionHeisenberg group(b, dyadic);
  IntegralPoint g{{1, 2}, 3}, h{{-1, 5}, 0};
  FracPoint gh = group.mul(group.hom(g), group.hom(h));
  FracPoint half = group.dilate(dyadic.make(1, 2), gh);
  std::cout << "in the group over Z[1/2]:\n";
  std::cout << "  central part of g h = " << show(gh.s) << "\n";
  std::cout << "  delta_{1/2}(g h)    = ((" << to_string(half.x.num[0]) << ", " << to_string(half.x.num[1]) << ")/"
            << to_string(half.x.den) << ", " << show(half.s) << ")\n";
}
