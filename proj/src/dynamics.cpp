#include "rwaqoc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace rwaqoc {

StateVector make_state(Eigen::VectorXcd amplitudes, Frame frame, double time) {
    StateVector s;
    s.amplitudes = std::move(amplitudes);
    s.frame = frame;
    s.time = time;
    return s;
}

StateVector basis_state(int n, int index, Frame frame, double time) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(index) = 1.0;
    return make_state(std::move(v), frame, time);
}

namespace {

// Phase rate of each frame relative to the lab frame: amplitude_F = e^{i phi_F t} psi.
double frame_rate(Frame frame, int k, const LevelSystem& system, const GammaAssignment* gamma) {
    switch (frame) {
        case Frame::Lab:
            return 0.0;
        case Frame::Interaction:
            return system.energies[k];
        case Frame::Rotating:
            if (gamma == nullptr)
                throw Error("frame_transform: rotating frame requires a gamma assignment");
            return system.energies[k] + gamma->gamma[k];
    }
    return 0.0;
}

void check_comparable(const StateVector& a, const StateVector& b) {
    if (a.frame != b.frame)
        throw FrameMismatchError("states live in different frames");
    if (std::abs(a.time - b.time) > 1e-9 * std::max({1.0, std::abs(a.time), std::abs(b.time)}))
        throw FrameMismatchError("states carry different time stamps");
    if (a.amplitudes.size() != b.amplitudes.size())
        throw Error("state dimension mismatch");
}

}  // namespace

StateVector frame_transform(const StateVector& state, Frame target, const LevelSystem& system,
                            const GammaAssignment* gamma) {
    if (state.amplitudes.size() != system.size())
        throw Error("frame_transform: state dimension does not match system");
    StateVector out = state;
    out.frame = target;
    if (target == state.frame) return out;
    for (int k = 0; k < system.size(); ++k) {
        const double rate =
            frame_rate(target, k, system, gamma) - frame_rate(state.frame, k, system, gamma);
        out.amplitudes(k) *= std::polar(1.0, rate * state.time);
    }
    return out;
}

double infidelity(const Eigen::VectorXcd& goal, const Eigen::VectorXcd& reached) {
    const double overlap = std::norm(goal.dot(reached));
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

double infidelity(const StateVector& goal, const StateVector& reached) {
    check_comparable(goal, reached);
    return infidelity(goal.amplitudes, reached.amplitudes);
}

double hilbert_distance(const Eigen::VectorXcd& goal, const Eigen::VectorXcd& start) {
    return (goal - start).norm();
}

double hilbert_distance(const StateVector& goal, const StateVector& start) {
    check_comparable(goal, start);
    return hilbert_distance(goal.amplitudes, start.amplitudes);
}

StateVector propagate_effective(const EffectiveGenerator& generator, const StateVector& b0,
                                double duration) {
    const Eigen::MatrixXcd& g = generator.matrix;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NonHermitianGeneratorError("effective generator is not Hermitian");
    if (b0.frame != Frame::Rotating)
        throw FrameMismatchError("propagate_effective expects a rotating-frame state");
    if (b0.amplitudes.size() != g.rows()) throw Error("propagate_effective: dimension mismatch");

    if (duration == 0.0) return b0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const Eigen::VectorXcd phases =
        (cx(0.0, -duration) * es.eigenvalues().cast<cx>()).array().exp();
    StateVector out = b0;
    out.amplitudes = es.eigenvectors() *
                     (phases.asDiagonal() * (es.eigenvectors().adjoint() * b0.amplitudes));
    out.time = b0.time + duration;
    return out;
}

namespace detail {

// Fehlberg 7(8) embedded pair, 13 stages; the step is advanced with the
// eighth-order weights while the error estimate controls the seventh order.
constexpr int kStages = 13;

struct Tableau {
    double a[kStages][kStages] = {};
    double c[kStages] = {};
    double b8[kStages] = {};
    double err[kStages] = {};  // b8 - b7
};

inline const Tableau& fehlberg78() {
    static const Tableau t = [] {
        Tableau tb;
        auto& a = tb.a;
        a[1][0] = 2.0 / 27.0;
        a[2][0] = 1.0 / 36.0;
        a[2][1] = 1.0 / 12.0;
        a[3][0] = 1.0 / 24.0;
        a[3][2] = 1.0 / 8.0;
        a[4][0] = 5.0 / 12.0;
        a[4][2] = -25.0 / 16.0;
        a[4][3] = 25.0 / 16.0;
        a[5][0] = 1.0 / 20.0;
        a[5][3] = 1.0 / 4.0;
        a[5][4] = 1.0 / 5.0;
        a[6][0] = -25.0 / 108.0;
        a[6][3] = 125.0 / 108.0;
        a[6][4] = -65.0 / 27.0;
        a[6][5] = 125.0 / 54.0;
        a[7][0] = 31.0 / 300.0;
        a[7][4] = 61.0 / 225.0;
        a[7][5] = -2.0 / 9.0;
        a[7][6] = 13.0 / 900.0;
        a[8][0] = 2.0;
        a[8][3] = -53.0 / 6.0;
        a[8][4] = 704.0 / 45.0;
        a[8][5] = -107.0 / 9.0;
        a[8][6] = 67.0 / 90.0;
        a[8][7] = 3.0;
        a[9][0] = -91.0 / 108.0;
        a[9][3] = 23.0 / 108.0;
        a[9][4] = -976.0 / 135.0;
        a[9][5] = 311.0 / 54.0;
        a[9][6] = -19.0 / 60.0;
        a[9][7] = 17.0 / 6.0;
        a[9][8] = -1.0 / 12.0;
        a[10][0] = 2383.0 / 4100.0;
        a[10][3] = -341.0 / 164.0;
        a[10][4] = 4496.0 / 1025.0;
        a[10][5] = -301.0 / 82.0;
        a[10][6] = 2133.0 / 4100.0;
        a[10][7] = 45.0 / 82.0;
        a[10][8] = 45.0 / 164.0;
        a[10][9] = 18.0 / 41.0;
        a[11][0] = 3.0 / 205.0;
        a[11][5] = -6.0 / 41.0;
        a[11][6] = -3.0 / 205.0;
        a[11][7] = -3.0 / 41.0;
        a[11][8] = 3.0 / 41.0;
        a[11][9] = 6.0 / 41.0;
        a[12][0] = -1777.0 / 4100.0;
        a[12][3] = -341.0 / 164.0;
        a[12][4] = 4496.0 / 1025.0;
        a[12][5] = -289.0 / 82.0;
        a[12][6] = 2193.0 / 4100.0;
        a[12][7] = 51.0 / 82.0;
        a[12][8] = 33.0 / 164.0;
        a[12][9] = 12.0 / 41.0;
        a[12][11] = 1.0;
        for (int i = 0; i < kStages; ++i) {
            tb.c[i] = 0.0;
            for (int j = 0; j < i; ++j) tb.c[i] += a[i][j];
        }
        const double w = 41.0 / 840.0;
        tb.b8[5] = 34.0 / 105.0;
        tb.b8[6] = 9.0 / 35.0;
        tb.b8[7] = 9.0 / 35.0;
        tb.b8[8] = 9.0 / 280.0;
        tb.b8[9] = 9.0 / 280.0;
        tb.b8[11] = w;
        tb.b8[12] = w;
        // b7 equals b8 except it carries weight w on stages 0 and 10 instead
        // of 11 and 12, so the difference reduces to four terms.
        tb.err[0] = -w;
        tb.err[10] = -w;
        tb.err[11] = w;
        tb.err[12] = w;
        return tb;
    }();
    return t;
}

template <typename Rhs>
void integrate_adaptive(const Rhs& rhs, Eigen::VectorXcd& y, double duration, double tol,
                        IntegratorStats& stats, const TrajectoryObserver& observer,
                        const std::atomic<bool>* stop) {
    if (duration < 0.0) throw Error("propagation duration must be nonnegative");
    if (!(tol > 0.0)) throw Error("integration tolerance must be positive");
    if (duration == 0.0) return;

    const Tableau& tb = fehlberg78();
    const Eigen::Index n = y.size();
    std::array<Eigen::VectorXcd, kStages> k;
    for (auto& ki : k) ki.resize(n);
    Eigen::VectorXcd ytmp(n);

    double t = 0.0;
    if (observer) observer(t, y);

    rhs(0.0, y, k[0]);
    ++stats.rhs_evaluations;
    double h = duration;
    const double f0 = k[0].norm();
    if (f0 > 0.0) h = std::min(duration, 0.01 * std::max(1.0, y.norm()) / f0);

    constexpr long kMaxSteps = 50'000'000;
    bool have_first_stage = true;  // k[0] already holds rhs(t, y)

    while (t < duration) {
        if (stop != nullptr && stop->load(std::memory_order_relaxed))
            throw Error("propagation cancelled");
        if (stats.steps + stats.rejected > kMaxSteps)
            throw StepSizeUnderflowError("step budget exceeded");
        h = std::min(h, duration - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepSizeUnderflowError("step size underflow at t=" + std::to_string(t));

        if (!have_first_stage) {
            rhs(t, y, k[0]);
            ++stats.rhs_evaluations;
        }
        for (int i = 1; i < kStages; ++i) {
            ytmp = y;
            for (int j = 0; j < i; ++j)
                if (tb.a[i][j] != 0.0) ytmp.noalias() += (h * tb.a[i][j]) * k[j];
            rhs(t + tb.c[i] * h, ytmp, k[i]);
            ++stats.rhs_evaluations;
        }

        double err = 0.0;
        for (Eigen::Index m = 0; m < n; ++m) {
            const cx e = h * (tb.err[0] * k[0](m) + tb.err[10] * k[10](m) + tb.err[11] * k[11](m) +
                              tb.err[12] * k[12](m));
            err = std::max(err, std::abs(e));
        }

        if (err <= tol) {
            for (int i = 0; i < kStages; ++i)
                if (tb.b8[i] != 0.0) y.noalias() += (h * tb.b8[i]) * k[i];
            t += h;
            ++stats.steps;
            stats.max_local_error = std::max(stats.max_local_error, err);
            if (observer) observer(t, y);
            have_first_stage = false;
        } else {
            ++stats.rejected;
        }

        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 1.0 / 8.0), 0.2, 5.0) : 5.0;
        h *= factor;
    }
}

}  // namespace detail

namespace {

// Interaction-picture right-hand side of the laser-driven model: the drive
// amplitude u(t) is shared by every coupling, each edge carries its own
// transition phase.
struct DriveRhs {
    std::vector<double> amp_re, amp_im, omega;
    std::vector<int> up, lo;
    std::vector<cx> coupling;
    std::vector<double> freq;  // E_up - E_lo

    void operator()(double t, const Eigen::VectorXcd& c, Eigen::VectorXcd& dc) const {
        double u = 0.0;
        for (std::size_t f = 0; f < omega.size(); ++f) {
            const double ph = omega[f] * t;
            u += amp_re[f] * std::cos(ph) + amp_im[f] * std::sin(ph);
        }
        dc.setZero();
        for (std::size_t e = 0; e < freq.size(); ++e) {
            const double ph = freq[e] * t;
            const cx z = u * coupling[e] * cx(std::cos(ph), std::sin(ph));
            dc(up[e]) += z * c(lo[e]);
            dc(lo[e]) += std::conj(z) * c(up[e]);
        }
        dc *= cx(0.0, -1.0);
    }
};

struct TermRhs {
    Eigen::VectorXd diagonal;
    std::vector<HarmonicTerm> terms;

    void operator()(double t, const Eigen::VectorXcd& c, Eigen::VectorXcd& dc) const {
        dc = diagonal.cast<cx>().cwiseProduct(c);
        for (const HarmonicTerm& term : terms) {
            const double ph = term.frequency * t;
            const cx z = term.amplitude * cx(std::cos(ph), std::sin(ph));
            dc(term.row) += z * c(term.col);
            dc(term.col) += std::conj(z) * c(term.row);
        }
        dc *= cx(0.0, -1.0);
    }
};

}  // namespace

PropagationResult propagate_exact(const LevelSystem& system, const LevelGraph& graph,
                                  const DriveSet& drives, const StateVector& psi0,
                                  double duration, double tol, const TrajectoryObserver& observer,
                                  const std::atomic<bool>* stop) {
    if (psi0.frame != Frame::Lab)
        throw FrameMismatchError("propagate_exact expects a lab-frame initial state");
    if (std::abs(psi0.time) > 1e-12)
        throw FrameMismatchError("propagate_exact expects the initial state at t = 0");
    if (psi0.amplitudes.size() != system.size())
        throw Error("propagate_exact: dimension mismatch");

    DriveRhs rhs;
    for (const DriveField& f : drives.fields) {
        rhs.amp_re.push_back(f.amplitude.real());
        rhs.amp_im.push_back(f.amplitude.imag());
        rhs.omega.push_back(f.omega);
    }
    for (const Edge& e : graph.edges) {
        rhs.up.push_back(e.up);
        rhs.lo.push_back(e.lo);
        rhs.coupling.push_back(e.coupling);
        rhs.freq.push_back(e.frequency);
    }

    PropagationResult result;
    result.duration = duration;
    Eigen::VectorXcd c = psi0.amplitudes;  // frames coincide at t = 0
    const double norm0 = c.norm();
    detail::integrate_adaptive(rhs, c, duration, tol, result.stats, observer, stop);
    result.norm_drift = std::abs(c.norm() - norm0);

    // Back to the lab frame: psi_k(T) = e^{-i E_k T} c_k(T).
    for (int k = 0; k < system.size(); ++k)
        c(k) *= std::polar(1.0, -system.energies[k] * duration);
    result.state = make_state(std::move(c), Frame::Lab, duration);
    return result;
}

PropagationResult propagate_terms(const Eigen::VectorXd& diagonal,
                                  const std::vector<HarmonicTerm>& terms,
                                  const Eigen::VectorXcd& initial, double duration, double tol,
                                  const TrajectoryObserver& observer,
                                  const std::atomic<bool>* stop) {
    for (const HarmonicTerm& term : terms) {
        if (term.row == term.col) throw Error("propagate_terms: diagonal harmonic term");
        if (term.row < 0 || term.row >= diagonal.size() || term.col < 0 ||
            term.col >= diagonal.size())
            throw Error("propagate_terms: index out of range");
    }
    TermRhs rhs{diagonal, terms};
    PropagationResult result;
    result.duration = duration;
    Eigen::VectorXcd y = initial;
    const double norm0 = y.norm();
    detail::integrate_adaptive(rhs, y, duration, tol, result.stats, observer, stop);
    result.norm_drift = std::abs(y.norm() - norm0);
    result.state = make_state(std::move(y), Frame::Rotating, duration);
    return result;
}

}  // namespace rwaqoc
