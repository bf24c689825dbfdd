#include "dsep/models/bilinear.hpp"

#include "dsep/error.hpp"
#include "../sparse_qr.hpp"
#include "internal.hpp"

namespace dsep::models {

Eigen::Index StateLayout::add(std::string name, Eigen::Index size, bool parameter) {
    for (const SlotGroup& g : groups_)
        if (g.name == name) throw Error(ErrorCode::InvalidArgument, "duplicate slot group '" + name + "'");
    groups_.push_back({std::move(name), size_, size, parameter});
    size_ += size;
    return groups_.back().offset;
}

const SlotGroup& StateLayout::group(std::string_view name) const {
    for (const SlotGroup& g : groups_)
        if (g.name == name) return g;
    throw Error(ErrorCode::InvalidArgument, "no slot group '" + std::string(name) + "'");
}

bool StateLayout::is_parameter(Eigen::Index slot) const {
    for (const SlotGroup& g : groups_)
        if (slot >= g.offset && slot < g.offset + g.size) return g.parameter;
    return false;
}

BilinearSystem::BilinearSystem(StateLayout layout) : layout_(std::move(layout)) {}

void BilinearSystem::begin_block(std::string name, RowKind kind) {
    if (!blocks_.empty()) blocks_.back().end = rows();
    blocks_.push_back({std::move(name), rows(), rows(), kind});
}

void BilinearSystem::begin_row(double measured) {
    if (blocks_.empty()) throw Error(ErrorCode::InvalidArgument, "rows must belong to a block");
    measured_.push_back(measured);
    kinds_.push_back(blocks_.back().kind);
    row_start_.push_back(terms_.size());
    blocks_.back().end = rows();
}

void BilinearSystem::linear(Eigen::Index a, double c) { terms_.push_back({a, -1, c}); }

void BilinearSystem::bilinear(Eigen::Index a, Eigen::Index b, double c) { terms_.push_back({a, b, c}); }

const RowBlock& BilinearSystem::block(std::string_view name) const {
    for (const RowBlock& b : blocks_)
        if (b.name == name) return b;
    throw Error(ErrorCode::InvalidArgument, "no row block '" + std::string(name) + "'");
}

Eigen::Map<const Eigen::VectorXd> BilinearSystem::measured() const {
    return {measured_.data(), rows()};
}

void BilinearSystem::set_measured(const Eigen::VectorXd& y) {
    if (y.size() != rows()) throw Error(ErrorCode::InvalidArgument, "measurement vector has the wrong length");
    for (Eigen::Index k = 0; k < rows(); ++k) measured_[static_cast<std::size_t>(k)] = y(k);
}

Eigen::VectorXd BilinearSystem::h(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(rows());
    for (std::size_t r = 0; r < row_start_.size(); ++r) {
        const std::size_t end = r + 1 < row_start_.size() ? row_start_[r + 1] : terms_.size();
        double sum = 0.0;
        for (std::size_t t = row_start_[r]; t < end; ++t) {
            const Term& term = terms_[t];
            sum += term.b < 0 ? term.c * x(term.a) : term.c * x(term.a) * x(term.b);
        }
        out(static_cast<Eigen::Index>(r)) = sum;
    }
    return out;
}

SparseMatrix BilinearSystem::jacobian(const Eigen::VectorXd& x) const {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * terms_.size());
    for (std::size_t r = 0; r < row_start_.size(); ++r) {
        const std::size_t end = r + 1 < row_start_.size() ? row_start_[r + 1] : terms_.size();
        const auto row = static_cast<int>(r);
        for (std::size_t t = row_start_[r]; t < end; ++t) {
            const Term& term = terms_[t];
            if (term.b < 0) {
                entries.emplace_back(row, static_cast<int>(term.a), term.c);
            } else {
                entries.emplace_back(row, static_cast<int>(term.a), term.c * x(term.b));
                entries.emplace_back(row, static_cast<int>(term.b), term.c * x(term.a));
            }
        }
    }
    SparseMatrix out(rows(), layout_.size());
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

Eigen::VectorXd BilinearSystem::weights(const Bases& bases) const {
    Eigen::VectorXd w(rows());
    for (Eigen::Index r = 0; r < rows(); ++r) {
        switch (kinds_[static_cast<std::size_t>(r)]) {
            case RowKind::Voltage:
            case RowKind::Gauge: w(r) = 1.0 / bases.v_base; break;
            case RowKind::Current: w(r) = 1.0 / bases.i_base; break;
            case RowKind::Constraint: w(r) = bases.constraint_gain / bases.i_base; break;
        }
    }
    return w;
}

std::vector<bool> BilinearSystem::referenced_slots() const {
    std::vector<bool> seen(static_cast<std::size_t>(layout_.size()), false);
    for (const Term& t : terms_) {
        seen[static_cast<std::size_t>(t.a)] = true;
        if (t.b >= 0) seen[static_cast<std::size_t>(t.b)] = true;
    }
    return seen;
}

Estimates ModelProblem::estimates(const Eigen::VectorXd& x) const {
    if (x.size() != system->layout().size()) throw Error(ErrorCode::InvalidArgument, "state has the wrong length");
    return id.family == Family::Phasor ? detail::phasor_estimates(*this, x) : detail::dynamic_estimates(*this, x);
}

LeastSquaresProblem make_problem(std::shared_ptr<const BilinearSystem> system, const Bases& bases) {
    LeastSquaresProblem p;
    p.dim_x = system->layout().size();
    p.dim_y = system->rows();
    p.weights = system->weights(bases);
    p.residual = [system](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return system->measured() - system->h(x);
    };
    p.jacobian = [system](const Eigen::VectorXd& x) { return system->jacobian(x); };
    return p;
}

Eigen::VectorXd refine_states(const BilinearSystem& system, const Bases& bases, const Eigen::VectorXd& x) {
    const StateLayout& layout = system.layout();
    std::vector<Eigen::Index> free_slots;
    for (Eigen::Index k = 0; k < layout.size(); ++k)
        if (!layout.is_parameter(k)) free_slots.push_back(k);
    const auto n_free = static_cast<Eigen::Index>(free_slots.size());

    const Eigen::VectorXd w = system.weights(bases);
    const SparseMatrix jac = system.jacobian(x);
    // column selection: jac * P where P picks the free slots
    SparseMatrix select(layout.size(), n_free);
    std::vector<Eigen::Triplet<double>> picks;
    for (Eigen::Index k = 0; k < n_free; ++k) picks.emplace_back(static_cast<int>(free_slots[static_cast<std::size_t>(k)]), static_cast<int>(k), 1.0);
    select.setFromTriplets(picks.begin(), picks.end());
    SparseMatrix a = w.asDiagonal() * jac * select;
    Eigen::VectorXd d(n_free);
    for (Eigen::Index k = 0; k < n_free; ++k) {
        d(k) = a.col(k).norm();
        if (d(k) == 0.0) throw Error(ErrorCode::RankDeficient, "state slot has no influence on the output");
    }
    a = a * d.cwiseInverse().asDiagonal();
    a.makeCompressed();

    dsep::detail::SparseLeastSquares qr;
    qr.factorize(a);
    const Eigen::VectorXd r = w.cwiseProduct(system.measured() - system.h(x));
    const Eigen::VectorXd step = qr.solve(r).cwiseQuotient(d);

    Eigen::VectorXd out = x;
    for (Eigen::Index k = 0; k < n_free; ++k) out(free_slots[static_cast<std::size_t>(k)]) += step(k);
    return out;
}

}  // namespace dsep::models
