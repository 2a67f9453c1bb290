#ifndef IONPULSE_QUAD_HPP
#define IONPULSE_QUAD_HPP

#include <functional>
#include <vector>

#include "ionpulse/fock.hpp"

namespace ionpulse {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre rule on [0, length] with `panels` equal panels.
// Node layout is panel-major, `order` points per panel.
class PanelGrid {
public:
    PanelGrid(double length, int panels, int order);

    double length() const { return length_; }
    int panels() const { return panels_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(x_.size()); }
    double node(int i) const { return x_[static_cast<std::size_t>(i)]; }
    double weight(int i) const { return w_[static_cast<std::size_t>(i)]; }
    int panel_of(int i) const { return i / order_; }
    double panel_start(int p) const { return panel_width_ * p; }
    double panel_width() const { return panel_width_; }

private:
    double length_;
    int panels_;
    int order_;
    double panel_width_;
    std::vector<double> x_, w_;
};

// Running integral F(t) = int_0^t f(s) ds evaluated by panel prefix sums
// plus a fresh Gauss rule on the partial panel containing t. Works for any
// value type supporting zero-init, += and scalar *.
template <typename V>
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<V(double)> f, const PanelGrid& grid, V zero)
        : f_(std::move(f)), grid_(grid), zero_(zero) {
        prefix_.resize(static_cast<std::size_t>(grid_.panels()) + 1, zero_);
        const int order = grid_.order();
        for (int p = 0; p < grid_.panels(); ++p) {
            V acc = zero_;
            for (int g = 0; g < order; ++g) {
                const int i = p * order + g;
                acc += grid_.weight(i) * f_(grid_.node(i));
            }
            prefix_[static_cast<std::size_t>(p) + 1] = prefix_[static_cast<std::size_t>(p)] + acc;
        }
    }

    V operator()(double t) const {
        const double width = grid_.panel_width();
        int p = static_cast<int>(t / width);
        if (p >= grid_.panels()) p = grid_.panels() - 1;
        if (p < 0) p = 0;
        const double a = grid_.panel_start(p);
        V acc = prefix_[static_cast<std::size_t>(p)];
        const GaussRule& rule = gauss_legendre(grid_.order());
        const double half = 0.5 * (t - a);
        const double mid = 0.5 * (t + a);
        for (std::size_t g = 0; g < rule.nodes.size(); ++g)
            acc += half * rule.weights[g] * f_(mid + half * rule.nodes[g]);
        return acc;
    }

    V total() const { return prefix_.back(); }

private:
    std::function<V(double)> f_;
    PanelGrid grid_;
    V zero_;
    std::vector<V> prefix_;
};

// Time-ordered simplex integrals of products of scalar functions,
//   I2 = int_0^T dt1 f1(t1) int_0^t1 dt2 f2(t2)
//   I3 = int_0^T dt1 f1(t1) int_0^t1 dt2 f2(t2) int_0^t2 dt3 f3(t3),
// evaluated by nested composite Gauss-Legendre. Function values are
// tabulated once on the shared node hierarchy so that many integrands built
// from the same few functions (the drive Fourier sums) are cheap.
class SimplexIntegrator {
public:
    SimplexIntegrator(double length, int panels, int order);

    struct Table {
        std::vector<Complex> x;  // values at top-level nodes
        std::vector<Complex> y;  // values at partial-panel nodes, per top node
        std::vector<Complex> z;  // values at second-level partial nodes
    };

    Table tabulate(const std::function<Complex(double)>& f) const;

    // One pass over every node position filling `count` tables at once;
    // `f(t, out)` writes `count` values. Cheaper when the functions share
    // work (the drive sums and their conjugates).
    std::vector<Table> tabulate_multi(const std::function<void(double, Complex*)>& f,
                                      int count) const;

    Complex integrate2(const Table& f1, const Table& f2) const;
    Complex integrate3(const Table& f1, const Table& f2, const Table& f3) const;

    int node_count() const { return grid_.size(); }

private:
    PanelGrid grid_;
    int order_;
    // y node positions: for each top node i, `order_` Gauss points on
    // [panel_start(panel_of(i)), node(i)], with matching weights.
    std::vector<double> ynode_, yweight_;
    // z node positions: the same construction below each y node.
    std::vector<double> znode_, zweight_;

    // cum[i] = int_0^{node(i)} f; needs f tabulated at y (and the panel
    // prefix built from the x values).
    std::vector<Complex> cumulative_at_nodes(const Table& f) const;
};

} // namespace ionpulse

#endif
