#include "gdss/signal_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gdss {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::runtime_error("signal CSV line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return v;
}

}  // namespace

void write_signal_csv(std::ostream& out, const ComplexSignal& signal) {
    out << "index,re,im\n";
    for (std::size_t j = 0; j < signal.size(); ++j)
        out << j << ',' << fmt(signal.samples[j].real()) << ',' << fmt(signal.samples[j].imag()) << '\n';
}

ComplexSignal read_signal_csv(std::istream& in, double sample_period) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    ComplexSignal signal;
    signal.sample_period = sample_period;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (line != "index,re,im") throw std::runtime_error("signal CSV: expected header 'index,re,im'");
            header = true;
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != 3)
            throw std::runtime_error("signal CSV line " + std::to_string(line_no) + ": expected 3 columns");
        const double index = parse_double(cells[0], line_no);
        if (index != static_cast<double>(signal.size()))
            throw std::runtime_error("signal CSV line " + std::to_string(line_no) + ": indices must run 0, 1, 2, ...");
        signal.samples.emplace_back(parse_double(cells[1], line_no), parse_double(cells[2], line_no));
    }
    if (!header) throw std::runtime_error("signal CSV: empty input");
    return signal;
}

void save_signal(const std::string& path, const ComplexSignal& signal) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_signal_csv(out, signal);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ComplexSignal load_signal(const std::string& path, double sample_period) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_signal_csv(in, sample_period);
}

void write_surface_csv(std::ostream& out, const AmbiguitySurface& surface) {
    out << "ell,k,re,im,abs\n";
    const int bins = surface.bins();
    // Rows in ascending signed Doppler: bins NM/2+1 .. NM-1 come first.
    const int first = -((bins - 1) / 2);
    const int last = bins / 2;
    for (int lag = surface.window().lo; lag <= surface.window().hi; ++lag)
        for (int k = first; k <= last; ++k) {
            const cplx v = surface.at(lag, k);
            out << lag << ',' << k << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ',' << fmt(std::abs(v)) << '\n';
        }
}

void save_surface(const std::string& path, const AmbiguitySurface& surface) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_surface_csv(out, surface);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace gdss
