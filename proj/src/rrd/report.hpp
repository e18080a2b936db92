#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rrd/experiments.hpp"

namespace rrd {

// Text formats shared by the CLI and the C API. Numbers are printed with a
// fixed number of decimals so reruns produce identical bytes.

inline constexpr const char* kPairCsvHeader =
    "stream_index,raw_size,reduced_size,distance,ratio_raw,ratio_reduced";
inline constexpr const char* kBucketCsvHeader =
    "range_lo,range_hi,count,avg_reduced_fraction,avg_ratio,sd_ratio";
inline constexpr const char* kHistogramCsvHeader = "bin_lo,count";

std::string format_fixed(double value, int decimals = 6);

void write_pair_csv_row(std::ostream& out, const PairRecord& rec);
void write_pair_csv(std::ostream& out, std::span<const PairRecord> records);

/// Reads a per-pair CSV as written by write_pair_csv. Throws kParse with the
/// offending line number.
std::vector<PairRecord> read_pair_csv(std::istream& in);

void write_bucket_csv(std::ostream& out, std::span<const BucketRow> rows);

/// Bins followed by "# n=<target> mean=<m> sd=<s> count=<c>".
void write_histogram_csv(std::ostream& out, const Histogram& h);

/// Bar chart with a normal density of the same mean and sd overlaid.
void write_histogram_svg(std::ostream& out, const Histogram& h);

}  // namespace rrd
