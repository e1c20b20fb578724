#include "gdss/codes.hpp"

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gdss/rng.hpp"

namespace gdss {
namespace {

// exp(sign * 2 pi i * num / den) with the numerator reduced first.
cplx twiddle(long long num, long long den, int sign) {
    long long r = num % den;
    if (r < 0) r += den;
    return std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

int lowest_subcarrier(int width) { return -(width / 2); }

}  // namespace

CodeMatrix::CodeMatrix(int time_slots, int subcarriers, std::vector<int> entries)
    : time_slots_(time_slots), subcarriers_(subcarriers), entries_(std::move(entries)) {
    if (time_slots_ <= 0 || subcarriers_ <= 0) throw std::invalid_argument("code matrix must be non-empty");
    if (subcarriers_ % 2 != 0) throw std::invalid_argument("code matrix needs an even number of subcarriers");
    if (entries_.size() != static_cast<std::size_t>(time_slots_) * static_cast<std::size_t>(subcarriers_))
        throw std::invalid_argument("code matrix entry count does not match its dimensions");
    for (int v : entries_)
        if (v != 1 && v != -1) throw std::invalid_argument("code matrix entries must be +1 or -1");
}

CodeMatrix CodeMatrix::negated() const {
    std::vector<int> flipped(entries_);
    for (int& v : flipped) v = -v;
    return CodeMatrix(time_slots_, subcarriers_, std::move(flipped));
}

void require_matching(const CodeMatrix& code, const RadarParams& params) {
    if (!code.matches(params)) {
        std::ostringstream msg;
        msg << "code is " << code.time_slots() << "x" << code.subcarriers() << " but geometry expects " << params.N_t
            << "x" << params.N_f;
        throw std::invalid_argument(msg.str());
    }
}

CodeMatrix random_code(const RadarParams& params, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> entries(static_cast<std::size_t>(params.N_t * params.N_f));
    for (int& v : entries) v = rng.sign();
    return CodeMatrix(params.N_t, params.N_f, std::move(entries));
}

CodeMatrix paper_good_code() {
    return CodeMatrix(8, 8,
                      {
                          -1, 1,  -1, 1,  -1, 1,  -1, -1,  //
                          -1, -1, -1, 1,  1,  -1, 1,  1,   //
                          -1, 1,  1,  -1, -1, -1, 1,  1,   //
                          -1, -1, 1,  1,  1,  -1, -1, 1,   //
                          -1, 1,  1,  1,  -1, -1, -1, -1,  //
                          -1, 1,  1,  -1, -1, -1, 1,  1,   //
                          -1, -1, 1,  1,  1,  -1, -1, 1,   //
                          1,  1,  1,  1,  -1, 1,  1,  -1,  //
                      });
}

CodeMatrix paper_bad_code() {
    return CodeMatrix(8, 8,
                      {
                          -1, -1, 1,  -1, -1, -1, 1,  1,   //
                          1,  1,  1,  1,  1,  -1, 1,  1,   //
                          -1, -1, -1, -1, -1, 1,  -1, -1,  //
                          1,  -1, -1, -1, 1,  1,  1,  -1,  //
                          -1, -1, 1,  1,  1,  1,  -1, -1,  //
                          1,  1,  -1, 1,  1,  -1, 1,  1,   //
                          1,  -1, 1,  -1, 1,  -1, 1,  1,   //
                          -1, 1,  1,  -1, -1, -1, 1,  1,   //
                      });
}

cplx DDMatrix::at(int k, int l) const {
    int kk = k % N;
    if (kk < 0) kk += N;
    int ll = l % M;
    if (ll < 0) ll += M;
    return values[static_cast<std::size_t>(kk * M + ll)];
}

DDMatrix to_delay_doppler(const CodeMatrix& code, const RadarParams& params) {
    require_matching(code, params);
    const int N = params.N;
    const int M = params.M;
    const int Nt = code.time_slots();
    const int Nf = code.subcarriers();
    const int m0 = lowest_subcarrier(Nf);

    // Along time first: partial[k][c] = sum_n X_tf[n, c] W_N^{-nk}.
    std::vector<cplx> partial(static_cast<std::size_t>(N * Nf));
    for (int k = 0; k < N; ++k)
        for (int c = 0; c < Nf; ++c) {
            cplx acc{};
            for (int n = 0; n < Nt; ++n) acc += static_cast<double>(code.at(n, c)) * twiddle(1LL * n * k, N, +1);
            partial[static_cast<std::size_t>(k * Nf + c)] = acc;
        }

    DDMatrix dd{N, M, std::vector<cplx>(static_cast<std::size_t>(N * M))};
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < M; ++l) {
            cplx acc{};
            for (int c = 0; c < Nf; ++c)
                acc += partial[static_cast<std::size_t>(k * Nf + c)] * twiddle(1LL * (m0 + c) * l, M, -1);
            dd.values[static_cast<std::size_t>(k * M + l)] = acc / static_cast<double>(M);
        }
    return dd;
}

std::vector<cplx> from_delay_doppler(const DDMatrix& dd) {
    const int N = dd.N;
    const int M = dd.M;
    const int m0 = lowest_subcarrier(M);

    // Along delay first: partial[k][c] = sum_l X[k, l] W_M^{-ml}.
    std::vector<cplx> partial(static_cast<std::size_t>(N * M));
    for (int k = 0; k < N; ++k)
        for (int c = 0; c < M; ++c) {
            cplx acc{};
            for (int l = 0; l < M; ++l) acc += dd.values[static_cast<std::size_t>(k * M + l)] * twiddle(1LL * (m0 + c) * l, M, +1);
            partial[static_cast<std::size_t>(k * M + c)] = acc;
        }

    std::vector<cplx> tf(static_cast<std::size_t>(N * M));
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < M; ++c) {
            cplx acc{};
            for (int k = 0; k < N; ++k) acc += partial[static_cast<std::size_t>(k * M + c)] * twiddle(1LL * n * k, N, -1);
            tf[static_cast<std::size_t>(n * M + c)] = acc / static_cast<double>(N);
        }
    return tf;
}

void write_code(std::ostream& out, const CodeMatrix& code) {
    for (int n = 0; n < code.time_slots(); ++n) {
        for (int c = 0; c < code.subcarriers(); ++c) {
            if (c > 0) out << ' ';
            out << code.at(n, c);
        }
        out << '\n';
    }
}

CodeMatrix read_code(std::istream& in) {
    std::vector<int> entries;
    int rows = 0;
    int cols = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        int count = 0;
        while (fields >> token) {
            if (token == "1")
                entries.push_back(1);
            else if (token == "-1")
                entries.push_back(-1);
            else
                throw std::invalid_argument("code file line " + std::to_string(line_no) + ": invalid token '" + token + "'");
            ++count;
        }
        if (count == 0) continue;
        if (cols >= 0 && count != cols)
            throw std::invalid_argument("code file line " + std::to_string(line_no) + ": ragged row");
        cols = count;
        ++rows;
    }
    if (rows == 0) throw std::invalid_argument("code file is empty");
    return CodeMatrix(rows, cols, std::move(entries));
}

CodeMatrix load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    return read_code(in);
}

void save_code(const std::string& path, const CodeMatrix& code) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write code file: " + path);
    write_code(out, code);
}

}  // namespace gdss
