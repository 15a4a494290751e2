#include "collector/csv.hpp"

#include <cmath>
#include <cstdio>

namespace collector::csv {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
const char* cert_name(CertKind k) {
    switch (k) {
        case CertKind::none: return "none";
        case CertKind::stat_stderr: return "stderr";
        case CertKind::analytic: return "analytic";
    }
    return "?";
}
} // namespace

void estimate_header(std::ostream& os) {
    os << "# " << kSchemaVersion << "\n";
    os << "lambda,theta,method,value,cert_type,cert_value,iterations,seed\n";
}

void estimate_row(std::ostream& os, const Policy& p, const LyapEstimate& e) {
    os << num(p.lambda) << ',' << num(p.theta) << ',' << method_name(e.method) << ','
       << num(e.value) << ',' << cert_name(e.cert_kind) << ',' << num(e.cert) << ','
       << e.iterations << ',' << e.seed << '\n';
}

void bound_row(std::ostream& os, const Policy& p, const std::string& name,
               const BoundValue& b, std::uint64_t seed) {
    os << num(p.lambda) << ',' << num(p.theta) << ",bound:" << name << ',' << num(b.value)
       << ',' << (b.exact ? "none" : "stderr") << ',' << num(b.se) << ',' << 1 << ',' << seed
       << '\n';
}

void heatmap_header(std::ostream& os) {
    os << "# " << kSchemaVersion << "\n";
    os << "lambda,theta,nu,cert,iters,flag\n";
}

void heatmap_row(std::ostream& os, const GridCell& c) {
    const char* flag = !c.est.converged ? "nonconverged" : (c.est.value < 0.0 ? "negative" : "");
    os << num(c.policy.lambda) << ',' << num(c.policy.theta) << ',' << num(c.est.value) << ','
       << num(c.est.cert) << ',' << c.est.iterations << ',' << flag << '\n';
}

void trajectory_header(std::ostream& os) {
    os << "# " << kSchemaVersion << "\n";
    os << "step,logX,logY,epsilon,delta\n";
}

void trajectory_rows(std::ostream& os, const CollectorState& s0, const LogTrajectory& traj,
                     const std::vector<EnvPair>& draws) {
    double lx = std::log(s0.x), ly = std::log(s0.y);
    os << 0 << ',' << num(lx) << ',' << num(ly) << ",,\n";
    for (std::size_t k = 0; k < traj.dlog_x.size(); ++k) {
        lx += traj.dlog_x[k];
        ly += traj.dlog_y[k];
        os << (k + 1) << ',' << num(lx) << ',' << num(ly) << ',';
        if (k < draws.size())
            os << num(draws[k].epsilon) << ',' << num(draws[k].delta);
        else
            os << ',';
        os << '\n';
    }
}

} // namespace collector::csv
