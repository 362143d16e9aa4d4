#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace rtnn::bench {

double compute_rt_factor(double t_signal, double t_process) {
    if (!(t_process > 0.0) || !std::isfinite(t_process))
        throw InvalidMeasurement("process time must be positive, got " + std::to_string(t_process));
    return t_signal / t_process;
}

std::string csv_header() { return "layer,api,backend,size,t_signal,t_process,v_rt"; }

std::string to_csv_row(const RtReport& r) {
    std::ostringstream os;
    os << to_string(r.config.layer) << ',' << to_string(r.config.api) << ',' << to_string(r.config.backend) << ','
       << r.config.size << ',' << std::setprecision(9) << r.t_signal << ',' << r.t_process << ',' << r.v_rt;
    return os.str();
}

} // namespace rtnn::bench
