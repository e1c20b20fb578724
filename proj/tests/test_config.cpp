#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <string>

#include "doctest.h"
#include "gdss/config.hpp"

using gdss::make_params;
using gdss::ParameterError;

TEST_CASE("desk geometry derives the expected units") {
    const auto p = make_params(64, 16, 8, 8, 1.0);
    CHECK(p.T_s == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(p.df == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(p.F_c == 1.0);
    CHECK(p.frame_len == 1024);
    CHECK(p.L == 160);
    CHECK(p.lag_half_width() == 2);
    CHECK(p.bin_half_width() == 8);
    CHECK(p.min_delay_lag() == 128);
    CHECK(p.max_delay_lag() == 896);
}

TEST_CASE("screening geometry") {
    const auto p = make_params(64, 64, 8, 8, 1.0);
    CHECK(p.T_s == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(p.df == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(p.frame_len == 4096);
}

TEST_CASE("default-constructed params equal the validated desk geometry") {
    CHECK(gdss::RadarParams{} == make_params(64, 16, 8, 8));
}

TEST_CASE("each violation is reported separately") {
    struct Case {
        int N, M, N_t, N_f;
        double T_c;
        const char* parameter;
    };
    const Case cases[] = {
        {1, 2, 1, 2, 1.0, "L"},      {0, 16, 8, 8, 1.0, "N"},    {64, 0, 8, 8, 1.0, "M"},
        {64, 16, 0, 8, 1.0, "N_t"},  {64, 16, 8, 0, 1.0, "N_f"}, {64, 16, 8, 7, 1.0, "N_f"},
        {4, 16, 8, 8, 1.0, "N_t"},   {64, 4, 2, 8, 1.0, "N_f"},  {64, 16, 8, 8, 0.0, "T_c"},
        {64, 16, 8, 8, NAN, "T_c"},
    };
    std::set<std::string> messages;
    for (const Case& c : cases) {
        CAPTURE(c.parameter);
        try {
            make_params(c.N, c.M, c.N_t, c.N_f, c.T_c);
            FAIL("accepted an invalid geometry");
        } catch (const ParameterError& e) {
            CHECK(e.parameter() == c.parameter);
            messages.insert(e.what());
        }
    }
    // Zero N_f and odd N_f share a parameter but not a message; the two T_c
    // cases share both.
    CHECK(messages.size() == std::size(cases) - 1);
    CHECK_NOTHROW(make_params(64, 16, 8, 8));
}

TEST_CASE("unit round trips hold for many geometries and pulse intervals") {
    for (int N : {8, 16, 64, 128})
        for (int M : {2, 4, 16, 64})
            for (double T_c : {1.0, 1e-6, 3.7, 250e-9}) {
                const int nt = std::max(1, N / 8);
                const int nf = 2;
                if ((nt + 2) * M > N * M) continue;
                const auto p = make_params(N, M, nt, nf, T_c);
                CHECK(1.0 / (p.T_s * p.M) == doctest::Approx(p.F_c).epsilon(1e-12));
                CHECK(1.0 / (p.N * p.M * p.T_s) == doctest::Approx(p.df).epsilon(1e-12));
                CHECK(p.T_s * p.M * p.F_c == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(p.df * p.N * p.M * p.T_s == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(p.N_t * p.M <= p.L);
                CHECK(p.L <= p.frame_len);
            }
}

TEST_CASE("larger M at fixed T_c gives a strictly shorter sample period") {
    double previous = INFINITY;
    for (int M = 2; M <= 256; M *= 2) {
        const auto p = make_params(64, M, 8, 2, 1.0);
        CHECK(p.T_s < previous);
        previous = p.T_s;
    }
}
