#include "gdss/config.hpp"

#include <cmath>

namespace gdss {

RadarParams make_params(int N, int M, int N_t, int N_f, double T_c) {
    if (N <= 0) throw ParameterError("N", "N must be positive");
    if (M <= 0) throw ParameterError("M", "M must be positive");
    if (N_t <= 0) throw ParameterError("N_t", "N_t must be positive");
    if (N_f <= 0) throw ParameterError("N_f", "N_f must be positive");
    if (!(T_c > 0.0) || !std::isfinite(T_c)) throw ParameterError("T_c", "T_c must be positive and finite");
    if (N_f % 2 != 0) throw ParameterError("N_f", "N_f must be even");
    if (N_t > N) throw ParameterError("N_t", "N_t must not exceed N");
    if (N_f > M) throw ParameterError("N_f", "N_f must not exceed M");

    RadarParams p;
    p.N = N;
    p.M = M;
    p.N_t = N_t;
    p.N_f = N_f;
    p.T_c = T_c;
    p.F_c = 1.0 / T_c;
    p.T_s = T_c / M;
    p.df = p.F_c / N;
    p.frame_len = N * M;
    p.L = (N_t + 2) * M;
    if (p.L > p.frame_len)
        throw ParameterError("L", "pulse support (N_t+2)*M exceeds the frame length N*M");
    return p;
}

}  // namespace gdss
