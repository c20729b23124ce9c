#include "cavmd/integrator.hpp"

#include "cavmd/error.hpp"
#include "cavmd/units.hpp"

#include <cmath>
#include <sstream>

namespace cavmd {

void IntegrationPlan::validate() const {
    if (!(dt_fs > 0.0)) throw InvalidInput("integration time step must be > 0");
    if (!(t_end_fs >= dt_fs)) throw InvalidInput("integration end time must be >= one time step");
    if (record_stride < 1) throw InvalidInput("record stride must be >= 1");
    for (const auto& d : force_drives) {
        if (!d.direction.allFinite()) throw InvalidInput("force drive direction is not finite");
    }
}

double IntegrationPlan::dt() const { return units::fs_to_atomic(dt_fs); }

std::size_t IntegrationPlan::step_count() const {
    return static_cast<std::size_t>(std::llround(t_end_fs / dt_fs));
}

void SimulationState::validate() const {
    matter.validate();
    for (const auto& mode : modes) mode.validate();
}

namespace {

void check_finite(const Eigen::Matrix3Xd& f, const char* term) {
    for (Eigen::Index a = 0; a < f.cols(); ++a) {
        if (!f.col(a).allFinite()) {
            std::ostringstream os;
            os << "non-finite " << term << " force on atom " << a;
            throw NumericalError(os.str());
        }
    }
}

struct Stepper {
    const HarmonicForceField& ff;
    const IntegrationPlan& plan;
    std::vector<std::optional<std::size_t>> drive_species;

    Stepper(const HarmonicForceField& ff_in, const IntegrationPlan& plan_in, const MatterState& m)
        : ff(ff_in), plan(plan_in) {
        for (const auto& d : plan.force_drives) {
            const auto s = m.find_species(d.species);
            if (!s) throw InvalidInput("force drive references unknown species '" + d.species + "'");
            drive_species.push_back(s);
        }
    }

    Eigen::Matrix3Xd force(const SimulationState& s) const {
        Eigen::Matrix3Xd f = matter_forces(ff, s.matter);
        check_finite(f, "force-field");
        if (!s.modes.empty()) {
            const Eigen::Matrix3Xd fc = cavity_force_on_atoms(s.modes, s.matter);
            check_finite(fc, "cavity");
            f += fc;
        }
        for (std::size_t k = 0; k < plan.force_drives.size(); ++k) {
            const auto& d = plan.force_drives[k];
            const Vec3 applied = -d.signal.value(s.time) * d.direction;
            if (!applied.allFinite()) throw NumericalError("non-finite external drive force");
            for (std::size_t a = 0; a < s.matter.atom_count(); ++a)
                if (s.matter.kind[a] == *drive_species[k]) f.col(static_cast<Eigen::Index>(a)) += applied;
        }
        return f;
    }

    // Advances `s` in place; `f` holds the force at the start and is replaced
    // by the force at the end of the step.
    void advance(SimulationState& s, Eigen::Matrix3Xd& f) const {
        const double dt = plan.dt();
        const Eigen::RowVectorXd inv_m = s.matter.masses().cwiseInverse().transpose();
        auto& v = s.matter.velocities;

        const Vec3 mu0 = s.modes.empty() ? Vec3::Zero() : dipole_moment(s.matter);
        v += 0.5 * dt * (f.array().rowwise() * inv_m.array()).matrix();
        s.matter.positions += dt * v;
        const double t0 = s.time;
        s.time += dt;
        if (!s.modes.empty()) {
            const Vec3 mu1 = dipole_moment(s.matter);
            for (auto& mode : s.modes) {
                const auto next = propagate_photon_analytic(mode, photon_source(mode, mu0, t0),
                                                            photon_source(mode, mu1, s.time), dt);
                mode.q = next.q;
                mode.p = next.p;
            }
        }
        f = force(s);
        v += 0.5 * dt * (f.array().rowwise() * inv_m.array()).matrix();
    }
};

Eigen::Matrix3Xd species_sums(const MatterState& m) {
    Eigen::Matrix3Xd out = Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(m.species.size()));
    for (std::size_t a = 0; a < m.atom_count(); ++a)
        out.col(static_cast<Eigen::Index>(m.kind[a])) += m.positions.col(static_cast<Eigen::Index>(a));
    return out;
}

}  // namespace

Eigen::Matrix3Xd total_force(const SimulationState& state, const HarmonicForceField& ff,
                             const IntegrationPlan& plan) {
    return Stepper(ff, plan, state.matter).force(state);
}

SimulationState step(const SimulationState& state, const HarmonicForceField& ff, const IntegrationPlan& plan) {
    plan.validate();
    state.validate();
    const Stepper stepper(ff, plan, state.matter);
    SimulationState next = state;
    Eigen::Matrix3Xd f = stepper.force(next);
    stepper.advance(next, f);
    return next;
}

std::vector<double> Trajectory::dipole_component(int axis) const {
    std::vector<double> out(dipole.size());
    for (std::size_t i = 0; i < dipole.size(); ++i) out[i] = dipole[i][axis];
    return out;
}

std::vector<double> Trajectory::photon_coordinate(std::size_t mode) const {
    std::vector<double> out(photon_q.size());
    for (std::size_t i = 0; i < photon_q.size(); ++i) out[i] = photon_q[i][static_cast<Eigen::Index>(mode)];
    return out;
}

bool Trajectory::operator==(const Trajectory& o) const {
    auto same_mats = [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].size() != b[i].size() || a[i] != b[i]) return false;
        return true;
    };
    return atom_names == o.atom_names && species_labels == o.species_labels && atom_kind == o.atom_kind &&
           seed == o.seed && dt == o.dt && record_stride == o.record_stride && times == o.times &&
           same_mats(positions, o.positions) && same_mats(velocities, o.velocities) &&
           same_mats(photon_q, o.photon_q) && same_mats(photon_p, o.photon_p) && dipole == o.dipole &&
           energy == o.energy && same_mats(species_position_sum, o.species_position_sum);
}

Trajectory run_trajectory(const SimulationState& state0, const HarmonicForceField& ff, const IntegrationPlan& plan) {
    plan.validate();
    state0.validate();
    ff.validate(state0.matter.atom_count());

    Trajectory traj;
    const auto& m0 = state0.matter;
    for (std::size_t a = 0; a < m0.atom_count(); ++a) traj.atom_names.push_back(m0.atom_name(a));
    for (const auto& s : m0.species) traj.species_labels.push_back(s.label);
    traj.atom_kind = m0.kind;
    traj.mode_parameters = state0.modes;
    traj.seed = plan.seed;
    traj.dt = plan.dt();
    traj.record_stride = plan.record_stride;

    const auto n_modes = static_cast<Eigen::Index>(state0.modes.size());
    auto record = [&](const SimulationState& s) {
        traj.times.push_back(s.time);
        traj.positions.push_back(s.matter.positions);
        traj.velocities.push_back(s.matter.velocities);
        Eigen::VectorXd q(n_modes), p(n_modes);
        for (Eigen::Index k = 0; k < n_modes; ++k) {
            q[k] = s.modes[static_cast<std::size_t>(k)].q;
            p[k] = s.modes[static_cast<std::size_t>(k)].p;
        }
        traj.photon_q.push_back(q);
        traj.photon_p.push_back(p);
        traj.dipole.push_back(dipole_moment(s.matter));
        traj.energy.push_back(total_energy(ff, s.matter, s.modes));
        traj.species_position_sum.push_back(species_sums(s.matter));
    };

    const Stepper stepper(ff, plan, m0);
    SimulationState s = state0;
    Eigen::Matrix3Xd f = stepper.force(s);
    record(s);
    const double e0 = traj.energy.front().total;
    double max_dev = 0.0;
    const std::size_t n_steps = plan.step_count();
    for (std::size_t n = 1; n <= n_steps; ++n) {
        try {
            stepper.advance(s, f);
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " at step " << n << " (t = " << units::atomic_to_fs(s.time) << " fs); largest force at the previous step "
               << f.colwise().norm().maxCoeff() << " Ha/bohr";
            throw NumericalError(os.str());
        }
        if (n % plan.record_stride == 0) {
            record(s);
            max_dev = std::max(max_dev, std::abs(traj.energy.back().total - e0));
        }
    }
    traj.drift.initial_total = e0;
    traj.drift.max_abs_deviation = max_dev;
    traj.drift.relative_deviation = e0 != 0.0 ? max_dev / std::abs(e0) : 0.0;
    traj.drift.final_deviation = traj.energy.back().total - e0;
    return traj;
}

}  // namespace cavmd
