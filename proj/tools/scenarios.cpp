#include "scenarios.hpp"

#include "adlab/adcheck.hpp"
#include "adlab/battery.hpp"
#include "adlab/openad.hpp"
#include "adlab/thermo.hpp"
#include "adlab/tqd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace adlab::cli {

int worker_count()
{
    int n = int(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("ADIABATIC_LAB_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
    }
    return n;
}

void parallel_for(int n, const std::function<void(int)>& fn)
{
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

using Row = std::vector<double>;

struct Table {
    std::vector<std::string> notes;  // extra '#' lines after the config echo
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(const Row& r)
    {
        std::vector<std::string> cells;
        for (double x : r) cells.push_back(format_number(x));
        rows.push_back(cells);
    }
};

std::vector<double> geometric(double a, double b, int n)
{
    if (n == 1) return {a};
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(a * std::pow(b / a, double(k) / (n - 1)));
    return out;
}

// Evaluates rows in parallel and appends them in index order.
void fill(Table& t, int n, const std::function<Row(int)>& fn)
{
    std::vector<Row> rows(n);
    parallel_for(n, [&](int i) { rows[i] = fn(i); });
    for (const auto& r : rows) t.add(r);
}

Table run_adcheck(const ScenarioConfig& c)
{
    const bool nmr = c.text("model") == "nmr", moving = c.text("frame") == "noninertial";
    const double w0 = c.number("omega0"), w1 = c.number("omega1"), tau = c.number("tau");
    const int grid = c.integer("grid");
    const auto rs = c.range("r-sweep");
    Table t;
    t.columns = {"r", "c_trad", "c_tong", "c_wu", "c_ar"};
    std::vector<std::string> skipped(rs.size());
    fill(t, int(rs.size()), [&](int i) {
        const double w = rs[i] * w0;
        Model m = nmr ? (moving ? nmr_rotating_frame(w0, w1, w, tau) : nmr_rotating(w0, w1, w, tau))
                      : (moving ? oscillating_noninertial(w0, w1, w, tau) : oscillating(w0, w1, w, tau));
        try {
            auto rep = evaluate_conditions(m.analytic(grid), m.h, c.text("frame"));
            return Row{rs[i], rep.c_trad, rep.c_tong.value, rep.c_wu, rep.c_ar};
        } catch (const std::domain_error&) {
            skipped[i] = format_number(rs[i]);
            const double nan = std::nan("");
            return Row{rs[i], nan, nan, nan, nan};
        }
    });
    for (const auto& s : skipped)
        if (!s.empty()) t.notes.push_back("degenerate gap at r = " + s + ", conditions undefined");
    for (const auto& row : t.rows)
        if (row[3] == "inf") {
            t.notes.push_back("c_wu = inf where the phase-shifted gap changes sign during the run");
            break;
        }
    return t;
}

Table run_deutsch(const ScenarioConfig& c)
{
    const bool balanced = c.flag("balanced");
    const double w = c.number("omega"), g = c.number("gamma") * w;
    const int n = c.integer("tau-ladder"), points = c.integer("points");
    const double t0 = c.number("tau-min") / w;
    Table t;
    t.columns = {"tau_s", "omega_tau", "f_os", "f_cs"};
    auto gamma = [g](double) { return g; };
    fill(t, n, [&](int i) {
        const double tau = t0 * std::pow(2.0, i);
        auto r = deutsch_scenario(balanced ? 0 : 1, 1, w, gamma, tau, points);
        return Row{tau, w * tau, r.f_os.back(), r.f_cs.back()};
    });
    return t;
}

Table run_heat(const ScenarioConfig& c)
{
    const double e = c.number("energy-pev") * 1e-12, kt = c.number("temperature-pev") * 1e-12;
    const double w = ev_to_angular(e), beta = hbar_ev_s / kt;
    const auto g0 = c.numbers("gamma0"), taus = c.numbers("tau-dec");
    const int steps = c.integer("steps");
    Table t;
    t.notes.push_back("heat in peV; gamma(t) = gamma0 (1 + t / tau_dec)");
    t.columns = {"gamma0", "tau_dec_s", "q_pev", "q_closed_pev", "q_max_pev"};
    const int nt = int(taus.size());
    fill(t, int(g0.size()) * nt, [&](int i) {
        const double gamma0 = g0[i / nt], td = taus[i % nt];
        auto r = dephasing_heat_scenario(w, beta, [=](double x) { return gamma0 * (1 + x / td); }, td, steps);
        const double to_pev = hbar_ev_s * 1e12;
        return Row{gamma0, td, r.q_total * to_pev, r.q_closed * to_pev, r.q_max * to_pev};
    });
    return t;
}

Table run_lz(const ScenarioConfig& c)
{
    const double delta = c.number("delta"), th0 = c.number("theta0");
    const int quad = c.integer("quad");
    const auto taus = geometric(c.number("tau-min"), c.number("tau-max"), c.integer("tau-count"));
    auto theta = [th0](double s) { return th0 * s; };
    auto dtheta = [th0](double) { return th0; };
    Table t;
    if (c.flag("intensities")) {
        const double tau_b = lz_intensities(theta, delta, taus.front(), quad).tau_b;
        t.notes.push_back("tau_b_ms = " + format_number(tau_b * 1e3));
        t.columns = {"tau_s", "i_std", "i_opt"};
        fill(t, int(taus.size()), [&](int i) {
            auto r = lz_intensities(theta, delta, taus[i], quad);
            return Row{taus[i], r.istd, r.iopt};
        });
    } else {
        t.columns = {"tau_s", "sigma_ad", "sigma_std", "sigma_opt"};
        fill(t, int(taus.size()), [&](int i) {
            Model m = lz_model(delta, theta, dtheta, taus[i]);
            return Row{taus[i], energy_cost_sigma(m.h, quad), energy_cost_sigma(standard_tqd(m), quad),
                       energy_cost_sigma(generalized_tqd(m, optimal_phases()), quad)};
        });
    }
    return t;
}

Table run_nmr(const ScenarioConfig& c)
{
    const double w0 = c.number("omega0"), w1 = c.number("omega1"), w = c.number("omega"), tau = c.number("tau");
    const int n = c.integer("points");
    Model m = nmr_rotating(w0, w1, w, tau);
    auto hs = standard_tqd(m);
    auto ho = generalized_tqd(m, optimal_phases());
    Table t;
    t.notes.push_back("b0_over_bopt = " + format_number(nmr_field_ratio(w0, w1, w)));
    t.columns = {"t_s", "b0", "b_std", "b_opt"};
    fill(t, n, [&](int i) {
        const double s = double(i) / (n - 1);
        return Row{s * tau, field_norm(m.h.h(s)), field_norm(hs.h(s)), field_norm(ho.h(s))};
    });
    return t;
}

GateVariant variant_of(const std::string& v)
{
    if (v == "adiabatic") return GateVariant::adiabatic;
    if (v == "standard") return GateVariant::standard;
    return GateVariant::optimal;
}

Table run_gate(const ScenarioConfig& c)
{
    GateSpec g;
    const auto axis = c.numbers("axis");
    g.axis = {axis[0], axis[1], axis[2]};
    g.phi = c.number("phi");
    g.phi0 = c.number("phi0");
    g.omega = c.number("nu");
    g.variant = variant_of(c.text("variant"));
    g.controlled = c.flag("controlled");
    const std::string in = c.text("input");
    Ket target(2);
    const double r = 1 / std::sqrt(2.0);
    if (in == "plus") target << r, r;
    else if (in == "minus") target << r, -r;
    else if (in == "zero") target << 1, 0;
    else target << 0, 1;
    Ket input = target;
    if (g.controlled) {
        Ket control(2);
        control << r, r;
        input = kron<double>(Operator(control), Operator(target)).col(0);
    }
    const auto taus = c.numbers("tau");
    const int steps = c.integer("steps");
    Table t;
    t.columns = {"tau_s", "fidelity", "success_prob"};
    fill(t, int(taus.size()), [&](int i) {
        auto run = gate_run(g, controlled_gate_schedule(g, taus[i]), input, steps);
        return Row{taus[i], run.fidelity, run.success_prob};
    });
    return t;
}

Table run_pulses(const ScenarioConfig& c)
{
    const GateVariant v = variant_of(c.text("variant"));
    const double tau = c.number("tau"), nu = c.number("nu") / (2 * M_PI), j = c.number("j") / (2 * M_PI);
    std::vector<int> slices;
    if (v == GateVariant::optimal) slices = {0};
    else
        for (double x : c.numbers("slices")) slices.push_back(int(x));
    const Operator target = propagator(phase_gate_schedule(v, tau, nu), c.integer("steps"));
    Table t;
    t.notes.push_back("energy in units of one rotation pulse");
    t.columns = {"slices", "rotations", "energy", "fidelity"};
    std::vector<PulseSequence> programs(slices.size());
    fill(t, int(slices.size()), [&](int i) {
        programs[i] = compile_pulse_sequence(v, slices[i], tau, nu, j);
        return Row{double(slices[i]), double(programs[i].rotation_count()), programs[i].energy(),
                   unitary_overlap(programs[i].unitary(), target)};
    });
    const std::string path = c.text("program");
    if (path != "none") {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write program to '" + path + "'");
        f << programs.back().to_text();
    }
    return t;
}

Table run_stirap(const ScenarioConfig& c)
{
    const auto protocol = c.text("protocol") == "stable" ? ChargeProtocol::stable : ChargeProtocol::unstable;
    const auto ramp = named_ramp(c.text("ramp"));
    const double rabi = c.number("rabi");
    const double w0 = c.number("omega0");
    const auto spec = transmon_ladder(w0);
    const auto rts = c.numbers("rabi-tau"), g0 = c.numbers("gamma0");
    const int steps = c.integer("steps");
    auto pulses = charging_pulses(protocol, ramp, rabi);
    Table t;
    t.notes.push_back("power_ratio = E(tau) / tau / p_max in units hbar w0 = 1, p_max = pi / (2 (w3 - w1))");
    t.columns = {"gamma0", "rabi_tau", "ergotropy_ratio", "power_ratio"};
    const int nr = int(rts.size());
    fill(t, int(g0.size()) * nr, [&](int i) {
        const double gamma0 = g0[i / nr], rt = rts[i % nr], tau = rt / rabi;
        const int n = std::max(steps, int(std::ceil(50 * rt)));
        auto r = stirap_charge(spec, pulses, ChargingNoise::transmon(gamma0, rabi), tau, protocol, n, 0, n);
        return Row{gamma0, rt, r.final_ergotropy / spec.e_max(), r.power_ratio / (w0 * w0 * w0)};
    });
    return t;
}

Table run_cells(const ScenarioConfig& c)
{
    const auto ramps = c.words("ramps");
    const double j = c.number("j"), w0 = c.number("omega0"), j_hz = j / (2 * M_PI);
    const auto jts = c.numbers("j-tau");
    const int steps = c.integer("steps");
    Table t;
    t.columns = {"ramp", "j_tau", "charge_ratio", "parity_drift"};
    const int nj = int(jts.size());
    std::vector<std::vector<std::string>> rows(ramps.size() * jts.size());
    parallel_for(int(rows.size()), [&](int i) {
        const double jt = jts[i % nj], tau = jt / j_hz;
        const int n = std::max(steps, int(std::ceil(2000 * jt)));
        auto r = two_cell_discharge(named_ramp(ramps[i / nj]), j, w0, tau, n, n);
        rows[i] = {ramps[i / nj], format_number(jt), format_number(r.final_ergotropy / r.capacity),
                   format_number(r.parity_drift)};
    });
    t.rows = rows;
    return t;
}

}  // namespace

std::string run_scenario(const ScenarioConfig& c)
{
    auto diag = validate(c);
    if (!diag.empty()) {
        std::string msg = c.scenario + ": invalid configuration";
        for (const auto& d : diag) msg += "\n  " + d;
        throw std::invalid_argument(msg);
    }
    const std::string& s = c.scenario;
    Table t = s == "adcheck"          ? run_adcheck(c)
              : s == "deutsch"        ? run_deutsch(c)
              : s == "heat"           ? run_heat(c)
              : s == "lz-tqd"         ? run_lz(c)
              : s == "nmr-tqd"        ? run_nmr(c)
              : s == "gate"           ? run_gate(c)
              : s == "pulses"         ? run_pulses(c)
              : s == "battery-stirap" ? run_stirap(c)
                                      : run_cells(c);
    std::ostringstream out;
    out << config_echo(c);
    for (const auto& n : t.notes) out << "# " << n << "\n";
    for (size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
    out << "\n";
    for (const auto& r : t.rows) {
        for (size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
        out << "\n";
    }
    return out.str();
}

}  // namespace adlab::cli
