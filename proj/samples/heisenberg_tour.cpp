// A walk through the group law on Z_3^2 x Z_3 with the upper-triangular form.

#include <iostream>
#include <string>

#include "mhg/heisenberg.hpp"

using namespace mhg;

static std::string show(const HPoint& g)
{
  std::string out = "((";
  for (std::size_t i = 0; i < g.x.rank(); ++i)
    out += (i ? ", " : "") + to_string(g.x[i].value());
  return out + "), " + to_string(g.s.value()) + ")";
}

static const char* show(Membership m)
{
  return m == Membership::Yes ? "yes" : m == Membership::No ? "no" : "inconclusive";
}

int main()
{
  HeisenbergContext ctx(3, BilinearForm{{0, 1}, {0, 0}}, 4);
  HPoint g = ctx.point({1, 0}, 0);
  HPoint h = ctx.point({0, 1}, 0);

  std::cout << "working modulo 3^" << ctx.precision() << "\n";
  std::cout << "g <> h       = " << show(ctx.mul(g, h)) << "\n";
  std::cout << "h <> g       = " << show(ctx.mul(h, g)) << "\n";
  std::cout << "g^-1         = " << show(ctx.inv(g)) << "\n";
  std::cout << "g h g^-1     = " << show(ctx.conjugate(g, h)) << "\n";
  std::cout << "delta_3(g h) = " << show(ctx.dilate(3, ctx.mul(g, h))) << "\n";

  HPoint deep = ctx.dilate(9, ctx.mul(g, h));
  for (std::uint64_t j = 0; j <= 2; ++j) {
    std::cout << "delta_9(g h) in H_" << j << ": " << show(ctx.member(deep, ChainFamily::H, j))
              << ", in G_" << j << ": " << show(ctx.member(deep, ChainFamily::G, j)) << "\n";
  }

  GroupDistance d = ctx.distance(g, ctx.mul(g, deep), ChainFamily::G);
  std::cout << "d_G(g, g delta_9(g h)): valuation " << d.valuation.str() << ", radius " << to_string(d.radius)
            << "\n";

  HeisenbergContext plane(2, BilinearForm{{0, 1}, {0, 0}}, 4);
  NormalityReport r = check_normality(plane, ChainFamily::G, 1, 4);
  if (r.witness) {
    std::cout << "G_1 is not normal (m=2): " << show(r.witness->conjugator) << " sends " << show(r.witness->element)
              << " to " << show(r.witness->conjugate) << "\n";
  }
}
