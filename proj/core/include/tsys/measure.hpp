#pragma once

#include <vector>

#include "tsys/system.hpp"

namespace tsys {

struct Atom {
    double node = 0.0;
    double weight = 0.0;
};

/// Finitely supported nonnegative measure: strictly increasing nodes with
/// strictly positive weights. Zero-weight atoms are dropped on construction.
struct AtomicMeasure {
    std::vector<Atom> atoms;

    int size() const { return static_cast<int>(atoms.size()); }
    bool empty() const { return atoms.empty(); }
    double total_mass() const;

    /// Sorts by node, merges coincident nodes, drops weights <= drop_below.
    static AtomicMeasure from_atoms(std::vector<Atom> atoms, double drop_below = 0.0);
};

/// Integral of g_i against the measure.
double integrate(const AtomicMeasure& mu, const FunctionSystem& sys, int i);
double integrate(const AtomicMeasure& mu, const Expr& g);

/// Atom counts on {a}, (a,b), {b}. Interior atoms count twice in the index.
struct SupportIndex {
    int at_a = 0;
    int interior = 0;
    int at_b = 0;
    int index() const { return at_a + 2 * interior + at_b; }
};

SupportIndex support_index(const AtomicMeasure& mu, double a, double b);

}  // namespace tsys
