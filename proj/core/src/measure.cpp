#include "tsys/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsys {

double AtomicMeasure::total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.weight;
    return s;
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms, double drop_below) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& l, const Atom& r) { return l.node < r.node; });
    AtomicMeasure mu;
    for (const Atom& a : atoms) {
        if (!mu.atoms.empty() && mu.atoms.back().node == a.node) {
            mu.atoms.back().weight += a.weight;
            continue;
        }
        mu.atoms.push_back(a);
    }
    std::erase_if(mu.atoms, [&](const Atom& a) { return a.weight <= drop_below; });
    return mu;
}

double integrate(const AtomicMeasure& mu, const FunctionSystem& sys, int i) {
    return integrate(mu, *sys.function(i));
}

double integrate(const AtomicMeasure& mu, const Expr& g) {
    double s = 0.0;
    for (const Atom& a : mu.atoms) s += a.weight * eval(g, a.node);
    return s;
}

SupportIndex support_index(const AtomicMeasure& mu, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("support_index: requires a < b");
    const double eps = 1e-12 * (b - a);
    SupportIndex idx;
    for (const Atom& atom : mu.atoms) {
        if (atom.node < a - eps || atom.node > b + eps) {
            throw std::invalid_argument("support_index: atom outside [a, b]");
        }
        if (std::abs(atom.node - a) <= eps) {
            ++idx.at_a;
        } else if (std::abs(atom.node - b) <= eps) {
            ++idx.at_b;
        } else {
            ++idx.interior;
        }
    }
    return idx;
}

}  // namespace tsys
