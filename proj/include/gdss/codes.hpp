#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdss/config.hpp"
#include "gdss/fft.hpp"

namespace gdss {

/**
 * The +/-1 time-frequency spreading code X_tf[n, m].
 *
 * Rows are time slots n in [0, N_t); columns are subcarriers m in
 * [-N_f/2, N_f/2), stored at column m + N_f/2.
 */
class CodeMatrix {
public:
    /// Throws std::invalid_argument unless every entry is +1 or -1 and the
    /// grid is rectangular with an even number of columns.
    CodeMatrix(int time_slots, int subcarriers, std::vector<int> entries);

    int time_slots() const { return time_slots_; }
    int subcarriers() const { return subcarriers_; }

    /// Entry by storage column (0-based).
    int at(int n, int column) const { return entries_[static_cast<std::size_t>(n * subcarriers_ + column)]; }

    /// Entry by signed subcarrier index m in [-N_f/2, N_f/2).
    int at_subcarrier(int n, int m) const { return at(n, m + subcarriers_ / 2); }

    const std::vector<int>& entries() const { return entries_; }

    /// Every entry negated.
    CodeMatrix negated() const;

    bool matches(const RadarParams& params) const {
        return time_slots_ == params.N_t && subcarriers_ == params.N_f;
    }

    friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

private:
    int time_slots_;
    int subcarriers_;
    std::vector<int> entries_;
};

/// Throws std::invalid_argument if the code does not fit the geometry.
void require_matching(const CodeMatrix& code, const RadarParams& params);

/// Independent fair +/-1 draws from Rng(seed), row-major.
CodeMatrix random_code(const RadarParams& params, std::uint64_t seed);

/// 8x8 code whose ambiguity main lobe is shown as close to a 2D sinc.
CodeMatrix paper_good_code();

/// 8x8 code shown as an example of a skewed main lobe.
CodeMatrix paper_bad_code();

/// N x M delay-Doppler grid, row k (Doppler), column l (delay).
struct DDMatrix {
    int N = 0;
    int M = 0;
    std::vector<cplx> values;

    /// Periodic access: k taken modulo N, l modulo M.
    cplx at(int k, int l) const;
};

/**
 * X[k, l] = (1/M) sum_n sum_m X_tf[n, m] W_N^{-nk} W_M^{ml}, with X_tf zero
 * outside the occupied N_t x N_f block. Diagnostic only.
 */
DDMatrix to_delay_doppler(const CodeMatrix& code, const RadarParams& params);

/// Inverse of to_delay_doppler: returns the full N x M time-frequency grid,
/// row n in [0, N), column m + M/2 for m in [-M/2, M/2).
std::vector<cplx> from_delay_doppler(const DDMatrix& dd);

/// Plain text: N_t lines of N_f space-separated values in {-1, 1}.
void write_code(std::ostream& out, const CodeMatrix& code);
CodeMatrix read_code(std::istream& in);
CodeMatrix load_code(const std::string& path);
void save_code(const std::string& path, const CodeMatrix& code);

}  // namespace gdss
