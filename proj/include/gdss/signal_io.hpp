#pragma once

#include <iosfwd>
#include <string>

#include "gdss/ambiguity.hpp"
#include "gdss/waveform.hpp"

namespace gdss {

// Signal CSV: header "index,re,im", one row per sample, indices 0..n-1 in order.
void write_signal_csv(std::ostream& out, const ComplexSignal& signal);
ComplexSignal read_signal_csv(std::istream& in, double sample_period = 1.0);
void save_signal(const std::string& path, const ComplexSignal& signal);
ComplexSignal load_signal(const std::string& path, double sample_period = 1.0);

// Surface CSV: header "ell,k,re,im,abs", k signed, lag-major.
void write_surface_csv(std::ostream& out, const AmbiguitySurface& surface);
void save_surface(const std::string& path, const AmbiguitySurface& surface);

}  // namespace gdss
