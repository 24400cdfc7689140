#pragma once

#include <random>
#include <vector>

#include "dcv/inference/verify.hpp"
#include "dcv/logic/transition_system.hpp"

// Boolean transition systems over x, y, z with one boolean parameter p. All
// their states can be enumerated, which gives a brute-force Houdini.
namespace dcv::testing::toys {

using namespace dcv::logic;

struct Toy {
  TransitionSystem ts;
  Expr prop;
  std::vector<Expr> candidates;
};

class BoolGen {
public:
  explicit BoolGen(unsigned seed) : rng_(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Expr gen(const std::vector<Expr>& atoms, int depth) {
    if (depth == 0 || pick(4) == 0) return atoms[pick(static_cast<int>(atoms.size()))];
    switch (pick(4)) {
    case 0: return mkNot(gen(atoms, depth - 1));
    case 1: return mkAnd(gen(atoms, depth - 1), gen(atoms, depth - 1));
    case 2: return mkOr(gen(atoms, depth - 1), gen(atoms, depth - 1));
    default: return mkImplies(gen(atoms, depth - 1), gen(atoms, depth - 1));
    }
  }

private:
  std::mt19937 rng_;
};

/// One transition setting x', y', z' to `next`.
Toy makeToy(std::vector<Expr> next, Expr init, Expr prop, std::vector<Expr> candidates);
/// x, y, z.
std::vector<Expr> atoms(const Toy& t);

/// The candidates selected by the bit mask `S` hold initially and are
/// preserved by every step from a state satisfying them and the property.
bool inductive(const Toy& t, unsigned S);
/// Greatest inductive subset of the candidates, by enumeration.
unsigned bruteForceHoudini(const Toy& t);
/// Survivor mask of the verifier's Houdini loop.
unsigned houdini(const Toy& t, bool batched, inference::VerifierConfig cfg);

/// Shift register, toggle, lock and counter, four candidates each.
std::vector<Toy> handWrittenToys();

} // namespace dcv::testing::toys
