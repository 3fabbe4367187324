#pragma once

#include "zt/gausssum.hpp"
#include "zt/rs.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zt {

struct Zt13Config {
    ExtReal t;
    ExtReal eps_t;  // 0 selects 2/log(1e18)
    int K = 30;
    int P = 3;
    ExtReal Y;  // 0 selects 10/9
    bool refined = true;
    int digits = 0;  // 0 selects the height policy
    // pivots are evaluated but their Gauss sums are only counted
    bool ops_only = false;

    // fills defaults and checks ranges; throws std::invalid_argument naming the field
    void normalise();
};

ExtReal default_eps();

struct PivotGeometry {
    ExtReal a;
    ExtReal pc;
    ExtReal x;
    ExtReal theta_plus;
    ExtReal theta_minus;
    ExtReal omega_plus;
    ExtReal omega_minus;
    ExtReal amplitude;  // (alpha^2 - a^2)^{-1/4}
};

ExtReal a_of_t(const ExtReal& t);  // sqrt(8t/pi)
ExtReal pc_of_alpha(const ExtReal& alpha, const ExtReal& a);
ExtReal n_of_alpha(const ExtReal& alpha, const ExtReal& a);
ExtReal alpha_of_n(const ExtReal& N, const ExtReal& t);

PivotGeometry pivot_geometry(const ExtReal& alpha, const ExtReal& t);

// 2 sqrt2 cos((t/2)(log pc + 1/pc) + t/2 + pi/8) / (alpha^2 - a^2)^{1/4}
ExtReal principal_term(std::int64_t alpha, const ExtReal& t);

enum class TransitionKind { none, formula, fallback };
const char* to_string(TransitionKind k);

struct TransitionTerm {
    TransitionKind kind = TransitionKind::none;
    ExtReal value;    // replaces the alpha = INT_O(a)+2 principal term when kind != none
    ExtReal epsilon;  // NINT_O(a) - a
    ExtReal rho;      // epsilon t^{1/6}
    bool degraded = false;
};
TransitionTerm transition_term(const ExtReal& t);

enum class Regime { below_Ya, above_Ya };
std::int64_t collection_size(std::int64_t alpha_E, const Zt13Config& cfg, Regime regime);
// upper limit on M_t valid for pc > 2.463
ExtReal collection_upper_bound(const ExtReal& alpha, const Zt13Config& cfg);

struct BlockPlan {
    int p = 0;
    std::int64_t M_t = 0;  // 0 for block 0
    std::int64_t first_pivot = 0;
    std::int64_t pivot_count = 0;  // block 0: number of principal terms
    std::int64_t alpha_lo = 0;     // odd
    std::int64_t alpha_hi = 0;     // odd, last alpha covered
    Regime regime = Regime::below_Ya;
};

struct Schedule {
    std::vector<BlockPlan> blocks;
    std::int64_t ib = 0;
    std::int64_t alpha_cut_formula = 0;  // INT_E[(eps t^2)^{1/3}/(sqrt(pi) log t)]
    std::int64_t alpha_final = 0;        // last alpha actually covered
    int step_up_block = 0;               // first block with frozen pivot count, 0 if none
};

Schedule block_schedule(const Zt13Config& cfg);

struct PivotBlock {
    int p = 0;
    std::int64_t pivot_count = 0;
    std::int64_t M_t = 0;
    std::int64_t M_t_minus = 0;
    std::int64_t alpha_first = 0;
    std::int64_t alpha_last = 0;
    std::int64_t n_lo = 0;  // RS terms replaced by this block
    std::int64_t n_hi = 0;
    ExtReal partial_sum;
    Ops ops;
    std::optional<ExtReal> reference;
};

struct ZpResult {
    ExtReal zp;
    std::vector<PivotBlock> blocks;
    TransitionTerm transition;
    Schedule schedule;
    Ops ops;
};

ZpResult zp_sum(Zt13Config cfg);

struct Zt13Result {
    ExtReal zp;
    ExtReal head_sum;
    ExtReal z_estimate;
    std::int64_t alpha_E_cut = 0;
    std::int64_t n_c = 0;
    std::vector<PivotBlock> blocks;
    Ops total_ops;
    TransitionTerm transition;
    int step_up_block = 0;
};

Zt13Result zt13(Zt13Config cfg);

// op count of a full run: schedule and chain control flow only
Ops zt13_ops(Zt13Config cfg);

struct HybridResult {
    ExtReal z;
    std::int64_t head_terms = 0;
    std::int64_t principal_terms = 0;
    double error_bound = 0;  // 1.01 (64 pi/t)^{1/4}
    TransitionTerm transition;
    Ops ops;
};
HybridResult hybrid17_run(const ExtReal& t);
ExtReal hybrid17(const ExtReal& t);

// fills PivotBlock::reference from RS partial sums with theta_c
void attach_references(const ExtReal& t, std::vector<PivotBlock>& blocks);

void write_block_table(std::ostream& os, const std::vector<PivotBlock>& blocks);
void write_block_csv(std::ostream& os, const std::vector<PivotBlock>& blocks);

}  // namespace zt
