// Quantum batteries: ergotropy, power operator, three-level STIRAP charging and the
// two-cell adiabatic discharge.
#pragma once

#include "adlab/spectral.hpp"

#include <string>
#include <vector>

namespace adlab {

// Passive state: descending populations of rho placed on ascending energies of h0.
Operator passive_state(const Operator& rho, const Operator& h0);
// Tr(h0 rho) - Tr(h0 passive(rho))
double ergotropy(const Operator& rho, const Operator& h0);

struct BatterySpec {
    RVec<double> levels;  // ascending level frequencies, rad/s

    void validate() const;
    Operator h0() const;
    double e_max() const { return levels(levels.size() - 1) - levels(0); }
    // pi / (2 (w_max - w_min)), used only as a normalization constant
    double p_max() const;
};

// (0, w0, 1.95 w0)
BatterySpec transmon_ladder(double omega0);

struct ChargingNoise {
    double decay21 = 0, decay32 = 0;  // 1/s
    double dephase2 = 0, dephase3 = 0;

    // decay21 = gamma0 * rabi, decay32 = dephase3 = 2 decay21, dephase2 = decay21
    static ChargingNoise transmon(double gamma0, double rabi);
    bool silent() const { return decay21 == 0 && decay32 == 0 && dephase2 == 0 && dephase3 == 0; }
};

using Ramp = std::function<double(double)>;
using Pulse = std::function<double(double)>;  // Rabi frequency at s = t / tau, rad/s

Ramp linear_ramp();
Ramp sine_squared_ramp();
Ramp smoothstep_ramp();
// "linear", "sin2", "smoothstep"
Ramp named_ramp(const std::string& name);
void check_ramp(const Ramp& f);

enum class ChargeProtocol { stable, unstable };

struct PulsePair {
    Pulse pump;    // couples levels 1 and 2
    Pulse stokes;  // couples levels 2 and 3
};

// stable: pump = w f, stokes = w (1 - f); unstable: pump = w (1 - f), stokes = w f
PulsePair charging_pulses(ChargeProtocol p, const Ramp& f, double rabi);
// Throws invalid_argument when the pulse boundary values do not select the protocol.
void check_protocol(ChargeProtocol p, const PulsePair& pulses);

// Interaction picture generator over the charge time tau followed by a hold at the final pulse values.
Schedule<double> stirap_schedule(const PulsePair& pulses, const ChargingNoise& noise, double tau, double hold = 0);
// Same dynamics in the lab frame with resonant carriers.
Schedule<double> stirap_lab_schedule(const BatterySpec& spec, const PulsePair& pulses, const ChargingNoise& noise,
                                     double tau, double hold = 0);

struct ChargeReport {
    std::vector<double> t;
    std::vector<double> ergotropy;  // battery ergotropy, or hub charge for the discharge
    std::vector<double> energy;     // Tr(H0 rho)
    std::vector<double> power;      // instantaneous d energy / dt
    std::vector<double> parity;     // discharge only
    double final_ergotropy = 0;
    double capacity = 0;     // e_max, or the hub capacity
    double power_ratio = 0;  // final_ergotropy / tau / p_max
    double tail_power = 0;   // max |power| over the last tenth of the run
    double parity_drift = 0;
    double max_commutator = 0;
};

ChargeReport stirap_charge(const BatterySpec& spec, const PulsePair& pulses, const ChargingNoise& noise, double tau,
                           ChargeProtocol protocol, int n_steps, double hold = 0, int stride = 1);

// Adiabatic predictions with Rabi frequencies a (pump) and b (stokes) and accumulated phase Phi = int Delta dt.
double dark_state_ergotropy(const BatterySpec& spec, double a, double b);
double bright_pair_ergotropy(const BatterySpec& spec, double a, double b, double phase);

// (1/i)[h0_a, hc]; throws invalid_argument if the result is not Hermitian within tol.
Operator power_operator(const Operator& h0_a, const Operator& hc, double tol = 1e-10);

// Qubits ordered battery cell 1, battery cell 2, hub.
Operator two_cell_initial_hamiltonian(double j);
Operator two_cell_middle_hamiltonian(double j);
Operator two_cell_final_hamiltonian(double j);
// (1-f) H_ini + (1-f) f H_mid + f H_fin
Schedule<double> two_cell_schedule(const Ramp& f, double j, double tau);
// w0 on |1> and -w0 on |0> of the hub
Operator hub_hamiltonian(double omega0);
Operator parity_operator();
// singlet on the cells, hub in |0>
Ket two_cell_initial_state();

ChargeReport two_cell_discharge(const Ramp& f, double j, double omega0, double tau, int n_steps, int stride = 1);

}  // namespace adlab
