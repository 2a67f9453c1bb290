#include "ionpulse/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ionpulse {

namespace {

GaussRule compute_gauss(int order) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const double pi = std::acos(-1.0);
    for (int k = 0; k < (order + 1) / 2; ++k) {
        double x = std::cos(pi * (k + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_order(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= order; ++l) {
                const double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(k)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - k)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[static_cast<std::size_t>(k)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - k)] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

PanelGrid::PanelGrid(double length, int panels, int order)
    : length_(length), panels_(panels), order_(order), panel_width_(length / panels) {
    const GaussRule& rule = gauss_legendre(order);
    x_.reserve(static_cast<std::size_t>(panels * order));
    w_.reserve(static_cast<std::size_t>(panels * order));
    for (int p = 0; p < panels; ++p) {
        const double a = panel_width_ * p;
        const double half = 0.5 * panel_width_;
        const double mid = a + half;
        for (int g = 0; g < order; ++g) {
            x_.push_back(mid + half * rule.nodes[static_cast<std::size_t>(g)]);
            w_.push_back(half * rule.weights[static_cast<std::size_t>(g)]);
        }
    }
}

SimplexIntegrator::SimplexIntegrator(double length, int panels, int order)
    : grid_(length, panels, order), order_(order) {
    const GaussRule& rule = gauss_legendre(order);
    const int top = grid_.size();
    ynode_.resize(static_cast<std::size_t>(top * order));
    yweight_.resize(static_cast<std::size_t>(top * order));
    for (int i = 0; i < top; ++i) {
        const double a = grid_.panel_start(grid_.panel_of(i));
        const double half = 0.5 * (grid_.node(i) - a);
        const double mid = 0.5 * (grid_.node(i) + a);
        for (int g = 0; g < order; ++g) {
            ynode_[static_cast<std::size_t>(i * order + g)] = mid + half * rule.nodes[static_cast<std::size_t>(g)];
            yweight_[static_cast<std::size_t>(i * order + g)] = half * rule.weights[static_cast<std::size_t>(g)];
        }
    }
    znode_.resize(static_cast<std::size_t>(top * order * order));
    zweight_.resize(static_cast<std::size_t>(top * order * order));
    for (int i = 0; i < top; ++i) {
        const double a = grid_.panel_start(grid_.panel_of(i));
        for (int g = 0; g < order; ++g) {
            const double y = ynode_[static_cast<std::size_t>(i * order + g)];
            const double half = 0.5 * (y - a);
            const double mid = 0.5 * (y + a);
            for (int g2 = 0; g2 < order; ++g2) {
                const std::size_t idx = static_cast<std::size_t>((i * order + g) * order + g2);
                znode_[idx] = mid + half * rule.nodes[static_cast<std::size_t>(g2)];
                zweight_[idx] = half * rule.weights[static_cast<std::size_t>(g2)];
            }
        }
    }
}

SimplexIntegrator::Table SimplexIntegrator::tabulate(const std::function<Complex(double)>& f) const {
    Table t;
    t.x.resize(static_cast<std::size_t>(grid_.size()));
    for (int i = 0; i < grid_.size(); ++i) t.x[static_cast<std::size_t>(i)] = f(grid_.node(i));
    t.y.resize(ynode_.size());
    for (std::size_t i = 0; i < ynode_.size(); ++i) t.y[i] = f(ynode_[i]);
    t.z.resize(znode_.size());
    for (std::size_t i = 0; i < znode_.size(); ++i) t.z[i] = f(znode_[i]);
    return t;
}

std::vector<SimplexIntegrator::Table> SimplexIntegrator::tabulate_multi(
    const std::function<void(double, Complex*)>& f, int count) const {
    std::vector<Table> tables(static_cast<std::size_t>(count));
    for (auto& t : tables) {
        t.x.resize(static_cast<std::size_t>(grid_.size()));
        t.y.resize(ynode_.size());
        t.z.resize(znode_.size());
    }
    std::vector<Complex> buf(static_cast<std::size_t>(count));
    for (int i = 0; i < grid_.size(); ++i) {
        f(grid_.node(i), buf.data());
        for (int c = 0; c < count; ++c) tables[static_cast<std::size_t>(c)].x[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(c)];
    }
    for (std::size_t i = 0; i < ynode_.size(); ++i) {
        f(ynode_[i], buf.data());
        for (int c = 0; c < count; ++c) tables[static_cast<std::size_t>(c)].y[i] = buf[static_cast<std::size_t>(c)];
    }
    for (std::size_t i = 0; i < znode_.size(); ++i) {
        f(znode_[i], buf.data());
        for (int c = 0; c < count; ++c) tables[static_cast<std::size_t>(c)].z[i] = buf[static_cast<std::size_t>(c)];
    }
    return tables;
}

std::vector<Complex> SimplexIntegrator::cumulative_at_nodes(const Table& f) const {
    const int top = grid_.size();
    std::vector<Complex> prefix(static_cast<std::size_t>(grid_.panels()) + 1, Complex(0.0));
    for (int p = 0; p < grid_.panels(); ++p) {
        Complex acc(0.0);
        for (int g = 0; g < order_; ++g) {
            const int i = p * order_ + g;
            acc += grid_.weight(i) * f.x[static_cast<std::size_t>(i)];
        }
        prefix[static_cast<std::size_t>(p) + 1] = prefix[static_cast<std::size_t>(p)] + acc;
    }
    std::vector<Complex> cum(static_cast<std::size_t>(top));
    for (int i = 0; i < top; ++i) {
        Complex acc = prefix[static_cast<std::size_t>(grid_.panel_of(i))];
        for (int g = 0; g < order_; ++g) {
            const std::size_t idx = static_cast<std::size_t>(i * order_ + g);
            acc += yweight_[idx] * f.y[idx];
        }
        cum[static_cast<std::size_t>(i)] = acc;
    }
    return cum;
}

Complex SimplexIntegrator::integrate2(const Table& f1, const Table& f2) const {
    const std::vector<Complex> cum = cumulative_at_nodes(f2);
    Complex total(0.0);
    for (int i = 0; i < grid_.size(); ++i)
        total += grid_.weight(i) * f1.x[static_cast<std::size_t>(i)] * cum[static_cast<std::size_t>(i)];
    return total;
}

Complex SimplexIntegrator::integrate3(const Table& f1, const Table& f2, const Table& f3) const {
    const int top = grid_.size();
    // Innermost cumulative of f3 at both node levels.
    const std::vector<Complex> c1x = cumulative_at_nodes(f3);
    std::vector<Complex> prefix3(static_cast<std::size_t>(grid_.panels()) + 1, Complex(0.0));
    for (int p = 0; p < grid_.panels(); ++p) {
        Complex acc(0.0);
        for (int g = 0; g < order_; ++g) {
            const int i = p * order_ + g;
            acc += grid_.weight(i) * f3.x[static_cast<std::size_t>(i)];
        }
        prefix3[static_cast<std::size_t>(p) + 1] = prefix3[static_cast<std::size_t>(p)] + acc;
    }
    // c1 at the partial-panel (y) nodes, via the z tabulation of f3.
    std::vector<Complex> c1y(ynode_.size());
    for (int i = 0; i < top; ++i) {
        const Complex base = prefix3[static_cast<std::size_t>(grid_.panel_of(i))];
        for (int g = 0; g < order_; ++g) {
            const std::size_t yidx = static_cast<std::size_t>(i * order_ + g);
            Complex acc = base;
            for (int g2 = 0; g2 < order_; ++g2) {
                const std::size_t zidx = yidx * static_cast<std::size_t>(order_) + static_cast<std::size_t>(g2);
                acc += zweight_[zidx] * f3.z[zidx];
            }
            c1y[yidx] = acc;
        }
    }
    // Middle cumulative of f2 * c1.
    std::vector<Complex> prefix2(static_cast<std::size_t>(grid_.panels()) + 1, Complex(0.0));
    for (int p = 0; p < grid_.panels(); ++p) {
        Complex acc(0.0);
        for (int g = 0; g < order_; ++g) {
            const int i = p * order_ + g;
            acc += grid_.weight(i) * f2.x[static_cast<std::size_t>(i)] * c1x[static_cast<std::size_t>(i)];
        }
        prefix2[static_cast<std::size_t>(p) + 1] = prefix2[static_cast<std::size_t>(p)] + acc;
    }
    Complex total(0.0);
    for (int i = 0; i < top; ++i) {
        Complex c2 = prefix2[static_cast<std::size_t>(grid_.panel_of(i))];
        for (int g = 0; g < order_; ++g) {
            const std::size_t yidx = static_cast<std::size_t>(i * order_ + g);
            c2 += yweight_[yidx] * f2.y[yidx] * c1y[yidx];
        }
        total += grid_.weight(i) * f1.x[static_cast<std::size_t>(i)] * c2;
    }
    return total;
}

} // namespace ionpulse
