#pragma once

// CSV, JSON and SVG writers for the command-line tool. Doubles are written
// with 17 significant digits so that files read back bit-exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "amo/diophantine.hpp"
#include "amo/interval_set.hpp"
#include "amo/periodic.hpp"
#include "amo/renorm.hpp"
#include "amo/thouless.hpp"

namespace amo::app {

// "%.17g"; NaN becomes the empty string.
std::string fmt(double x);

struct BandRow {
  double lambda;
  std::int64_t p, q;
  int k;
  double sigma_lo, inner_lo, inner_hi, sigma_hi;  // inner_* NaN when sigma is empty
  bool has_x = false;
  std::vector<Interval> in_x;  // pieces of X inside this band
};

std::vector<BandRow> band_rows(const BandSpectrum& spec, const IntervalSet* x = nullptr);

// lambda,p,q,k,sigma_lo,inner_lo,inner_hi,sigma_hi[,in_X] with in_X as "lo:hi|lo:hi".
void write_bands_csv(std::ostream& os, const std::vector<BandRow>& rows);
void write_bands_json(std::ostream& os, const std::vector<BandRow>& rows);
// Throws std::runtime_error on malformed input.
std::vector<BandRow> read_bands_csv(std::istream& is);
IntervalSet sigma_set(const std::vector<BandRow>& rows);
IntervalSet inner_set(const std::vector<BandRow>& rows);

struct ButterflyRow {
  std::int64_t p, q;
  int k;
  double sigma_lo, sigma_hi;
};

inline constexpr std::int64_t kButterflyQMax = 100;

// All reduced p/q in [0, 1) with q <= q_max, ordered by q then p.
// Throws DegenerateQ above kButterflyQMax.
std::vector<ButterflyRow> butterfly(double lambda, std::int64_t q_max);
void write_butterfly_csv(std::ostream& os, const std::vector<ButterflyRow>& rows);
void write_butterfly_json(std::ostream& os, double lambda, const std::vector<ButterflyRow>& rows);
// 1000 x 1000 viewBox: energy horizontal over [-2 - 2 lambda, 2 + 2 lambda],
// alpha vertical with alpha = 0 at the bottom.
void write_butterfly_svg(std::ostream& os, double lambda, const std::vector<ButterflyRow>& rows);

void write_pq_json(std::ostream& os, const PqWindow& w, const IntervalSet& intervals);
void write_pq_csv(std::ostream& os, const IntervalSet& intervals);

void write_thouless_csv(std::ostream& os, const ThoulessReport& r);
void write_thouless_json(std::ostream& os, const ThoulessReport& r);

}  // namespace amo::app
