#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsep/gauss_newton.hpp"
#include "dsep/models/model_id.hpp"

namespace dsep::models {

/// Named, contiguous groups of state slots ("G", "Lambda", "v_ra", ...).
struct SlotGroup {
    std::string name;
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
    bool parameter = false;  ///< circuit parameter rather than internal voltage/current
};

class StateLayout {
public:
    Eigen::Index add(std::string name, Eigen::Index size, bool parameter = false);

    Eigen::Index size() const noexcept { return size_; }
    const std::vector<SlotGroup>& groups() const noexcept { return groups_; }
    /// Throws Error(InvalidArgument) for an unknown group.
    const SlotGroup& group(std::string_view name) const;
    Eigen::Index at(std::string_view name, Eigen::Index k = 0) const { return group(name).offset + k; }
    bool is_parameter(Eigen::Index slot) const;

private:
    std::vector<SlotGroup> groups_;
    Eigen::Index size_ = 0;
};

enum class RowKind { Voltage, Current, Constraint, Gauge };

/// Per-unit bases used to weight rows: voltage and gauge rows by 1/v_base,
/// current rows by 1/i_base and constraint rows by constraint_gain/i_base.
/// Constraint rows are exact model equations rather than noisy readings, so
/// they are weighted above the measurements they tie together.
struct Bases {
    double v_base = 1.0;
    double i_base = 1.0;
    double constraint_gain = 100.0;
};

/// Named contiguous range of measurement rows ("v:va", "i:ib", "z:bc", ...).
struct RowBlock {
    std::string name;
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    RowKind kind = RowKind::Voltage;
};

/// Output function whose rows are sums of c * x_a (linear) and
/// c * x_a * x_b (bilinear) terms. Measured values sit alongside; constraint
/// rows measure zero.
class BilinearSystem {
public:
    explicit BilinearSystem(StateLayout layout);

    void begin_block(std::string name, RowKind kind);
    void begin_row(double measured);
    void linear(Eigen::Index a, double c);
    void bilinear(Eigen::Index a, Eigen::Index b, double c);

    const StateLayout& layout() const noexcept { return layout_; }
    Eigen::Index rows() const noexcept { return static_cast<Eigen::Index>(measured_.size()); }
    const std::vector<RowBlock>& blocks() const noexcept { return blocks_; }
    const RowBlock& block(std::string_view name) const;
    Eigen::Map<const Eigen::VectorXd> measured() const;
    void set_measured(const Eigen::VectorXd& y);

    Eigen::VectorXd h(const Eigen::VectorXd& x) const;
    SparseMatrix jacobian(const Eigen::VectorXd& x) const;
    Eigen::VectorXd weights(const Bases& bases) const;

    /// Slots referenced by at least one term.
    std::vector<bool> referenced_slots() const;

private:
    struct Term {
        Eigen::Index a;
        Eigen::Index b;  // < 0 for a linear term
        double c;
    };

    StateLayout layout_;
    std::vector<double> measured_;
    std::vector<RowKind> kinds_;
    std::vector<std::size_t> row_start_;
    std::vector<Term> terms_;
    std::vector<RowBlock> blocks_;
};

/// Estimated circuit quantities in SI units. Dynamic models set `l` and derive
/// `x` = w L; phasor models set `x` and derive `l` = X / w.
struct Estimates {
    double r = 0.0;
    double l = 0.0;
    double x = 0.0;
    std::optional<double> rf;
    /// Phasor unbalanced grounded-wye model: phase whose admittance carries the
    /// fault excess.
    std::optional<Phase> faulted_phase;
};

/// A built hypothesis: its bilinear system, the solver-facing problem and the
/// documented start point.
struct ModelProblem {
    ModelId id;
    std::shared_ptr<BilinearSystem> system;
    LeastSquaresProblem problem;
    Eigen::VectorXd x0;
    Bases bases;
    double omega = kNominalOmega;

    Estimates estimates(const Eigen::VectorXd& x) const;
};

/// Builds the solver problem for `system` with measurement weights from `bases`.
LeastSquaresProblem make_problem(std::shared_ptr<const BilinearSystem> system, const Bases& bases);

/// With the parameter slots held fixed the output is linear in the remaining
/// slots; solves that linear least-squares problem exactly and returns the
/// updated state. Errors: RankDeficient.
Eigen::VectorXd refine_states(const BilinearSystem& system, const Bases& bases, const Eigen::VectorXd& x);

}  // namespace dsep::models
