#include "adlab/tqd.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace adlab {

namespace {

const Operator I2 = Operator::Identity(2, 2);

Operator on_spin(const Operator& a, int spin)
{
    return spin == 0 ? kron<double>(a, I2) : kron<double>(I2, a);
}

Operator rotation(double angle, double phase)
{
    Operator n = std::cos(phase) * pauli<double>('X') + std::sin(phase) * pauli<double>('Y');
    return std::cos(angle / 2) * I2 - cplx(0, std::sin(angle / 2)) * n;
}

PulseItem rot(double angle, double phase)
{
    PulseItem p;
    p.kind = PulseItem::Kind::rotation;
    p.spin = 1;
    if (angle < 0) {
        angle = -angle;
        phase += M_PI;
    }
    p.angle = angle;
    p.phase = std::remainder(phase, 2 * M_PI);
    return p;
}

PulseItem free_for(double dt)
{
    PulseItem p;
    p.kind = PulseItem::Kind::free;
    p.dt = dt;
    return p;
}

void check_interval(double dt, int slice)
{
    if (dt < 0)
        throw std::invalid_argument("compile_pulse_sequence: negative free interval in slice " + std::to_string(slice));
}

}  // namespace

int PulseSequence::rotation_count() const
{
    int n = 0;
    for (const auto& p : items) n += p.kind == PulseItem::Kind::rotation;
    return n;
}

std::string PulseSequence::to_text() const
{
    std::ostringstream os;
    char buf[128];
    for (const auto& p : items) {
        switch (p.kind) {
        case PulseItem::Kind::rotation:
            std::snprintf(buf, sizeof buf, "ROT %d %.17g %.17g\n", p.spin, p.angle, p.phase);
            break;
        case PulseItem::Kind::free: std::snprintf(buf, sizeof buf, "FREE %.17g\n", p.dt); break;
        case PulseItem::Kind::zframe:
            std::snprintf(buf, sizeof buf, "ZFRAME %d %.17g\n", p.spin, p.angle);
            break;
        }
        os << buf;
    }
    return os.str();
}

PulseSequence PulseSequence::from_text(const std::string& text, double coupling_hz)
{
    PulseSequence seq;
    seq.coupling_hz = coupling_hz;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op) || op[0] == '#') continue;
        PulseItem p;
        bool ok = false;
        if (op == "ROT") {
            p.kind = PulseItem::Kind::rotation;
            ok = bool(ls >> p.spin >> p.angle >> p.phase);
        } else if (op == "FREE") {
            p.kind = PulseItem::Kind::free;
            ok = bool(ls >> p.dt);
        } else if (op == "ZFRAME") {
            p.kind = PulseItem::Kind::zframe;
            ok = bool(ls >> p.spin >> p.angle);
        }
        if (!ok || (p.spin != 0 && p.spin != 1))
            throw std::invalid_argument("pulse program line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
        seq.items.push_back(p);
    }
    return seq;
}

Operator PulseSequence::unitary() const
{
    const Operator zz = kron<double>(pauli<double>('Z'), pauli<double>('Z'));
    const double a = M_PI * coupling_hz / 2;
    Operator u = Operator::Identity(4, 4);
    for (const auto& p : items) {
        Operator step;
        switch (p.kind) {
        case PulseItem::Kind::rotation: step = on_spin(rotation(p.angle, p.phase), p.spin); break;
        case PulseItem::Kind::free: {
            // Z x Z is diagonal with entries +-1
            step = Operator::Zero(4, 4);
            for (int i = 0; i < 4; ++i) step(i, i) = std::polar(1.0, -a * p.dt * std::real(zz(i, i)));
            break;
        }
        case PulseItem::Kind::zframe: {
            Operator rz = Operator::Zero(2, 2);
            rz(0, 0) = std::polar(1.0, -p.angle / 2);
            rz(1, 1) = std::polar(1.0, p.angle / 2);
            step = on_spin(rz, p.spin);
            break;
        }
        }
        u = step * u;
    }
    return u;
}

PulseSequence compile_pulse_sequence(GateVariant v, int n, double tau, double nu_hz, double j_hz)
{
    if (j_hz <= 0) throw std::invalid_argument("compile_pulse_sequence: coupling must be positive");
    if (tau <= 0) throw std::invalid_argument("compile_pulse_sequence: tau must be positive");
    PulseSequence seq;
    seq.coupling_hz = j_hz;
    auto& it = seq.items;

    if (v == GateVariant::optimal) {
        const double dt1 = (j_hz * tau + 1) / (2 * j_hz);
        const double dt2 = tau - dt1;
        check_interval(dt2, 1);
        it = {rot(M_PI / 2, 0), free_for(dt1), rot(M_PI, 0), free_for(dt2), rot(M_PI / 2, 0)};
        return seq;
    }
    if (n < 2) throw std::invalid_argument("compile_pulse_sequence: need at least two slices");
    const double w = 2 * M_PI * nu_hz;
    const double slice = tau / n;

    if (v == GateVariant::adiabatic) {
        // toggled frame R_y(pi/2): 1 x Z -> X on the ancilla, Z x X -> -Z x Z
        it.push_back(rot(M_PI / 2, M_PI / 2));
        for (int m = 0; m < n; ++m) {
            const double s = (m + 0.5) / n;
            const double dt1 = slice / 2 * (4 * nu_hz / j_hz * std::sin(M_PI * s) + 1);
            const double dt2 = slice - dt1;
            check_interval(dt2, m + 1);
            it.push_back(free_for(dt1));
            it.push_back(rot(M_PI, 0));
            it.push_back(free_for(dt2));
            it.push_back(rot(-M_PI - 2 * w * slice * std::cos(M_PI * s), 0));
        }
        it.push_back(rot(M_PI / 2, 3 * M_PI / 2));
        return seq;
    }

    // standard: ancilla z terms tracked as a virtual frame
    double frame = 0;
    const double zy_time = slice / (j_hz * tau);
    for (int m = 0; m < n; ++m) {
        const double s = (m + 0.5) / n;
        const double dt1 = slice / 2 * (4 * nu_hz / j_hz * std::sin(M_PI * s) + 1);
        const double dt2 = slice - dt1;
        check_interval(dt2, m + 1);
        it.push_back(rot(M_PI / 2, M_PI / 2 - frame));
        it.push_back(free_for(dt1));
        it.push_back(rot(M_PI, M_PI / 2 - frame));
        it.push_back(free_for(dt2));
        it.push_back(rot(M_PI / 2, M_PI / 2 - frame));
        it.push_back(rot(M_PI / 2, -frame));
        it.push_back(free_for(zy_time));
        it.push_back(rot(M_PI / 2, M_PI - frame));
        frame -= 2 * w * slice * std::cos(M_PI * s);
    }
    PulseItem z;
    z.kind = PulseItem::Kind::zframe;
    z.angle = frame;
    it.push_back(z);
    return seq;
}

}  // namespace adlab
