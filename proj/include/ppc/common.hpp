#pragma once

// Shared plumbing: error types, deterministic RNG, reproducible summation,
// CSV/number formatting, and a fixed-chunk parallel_for.  Everything here is
// deliberately deterministic: reruns with the same seed must produce
// byte-identical output no matter how many threads are used.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppc {

inline constexpr const char* kVersion = "0.1.0";

// Bad user input (malformed file, parameter out of range).  CLI exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request is well-formed but exceeds a hard resource cap (memory, enumeration
// bounds).  Also CLI exit code 1; the message states the cap that was hit.
struct FeasibilityError : std::runtime_error {
    explicit FeasibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Pairwise (tree) reduction.  Summation order depends only on the element
// order, never on thread count, so results are bit-reproducible.
double pairwise_sum(std::span<const double> xs);

// splitmix64 step; used for seed derivation and as a cheap stream mixer.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic PRNG (xoshiro256** seeded via splitmix64).  All helpers are
// implemented on top of raw 64-bit draws so the byte stream is identical
// across platforms and standard library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // uniform in [0,1) with 53-bit resolution
    double u01();
    // uniform real in [a,b)
    double uniform(double a, double b);
    // uniform integer in [lo,hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    // child generator for instance i; independent of draws made on the parent
    Rng derive(std::uint64_t i) const;

  private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
};

// %.17g rendering: shortest-ish form that round-trips a double exactly.
std::string format_real(double x);
std::string format_int(std::int64_t v);

// Minimal CSV writer: '.' decimal point, no quoting (values never contain
// commas), one header row.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    void row(const std::vector<std::string>& cells);
    void close();

  private:
    std::string path_;
    std::string buf_;
    bool open_ = false;
};

// Runs fn(i) for i in [0,n).  Work is split into fixed contiguous chunks so
// that per-index results (written by fn into preallocated storage) do not
// depend on the thread count.  threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Thread-count resolution: PAIRCORR_THREADS env var wins over the requested
// value; requested <= 0 means auto (hardware concurrency).
int resolve_threads(int requested);

// Ordinary least squares fit of y against x.  Returns slope, intercept and
// the RMS residual of the fit.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rmsResidual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ppc
