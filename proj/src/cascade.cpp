#include "ska/cascade.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#include "ska/rng.hpp"

namespace ska {

namespace {

constexpr std::size_t kMaxInitialBlockSize = std::size_t{1} << 20;

std::size_t search_mid(std::size_t lo, std::size_t hi) {
    return lo + (hi - lo + 1) / 2;
}

std::size_t flip_budget(std::size_t n) { return 2 * n + 64; }

using BlockRef = std::pair<std::size_t, std::size_t>;

// A flip changes the corrector's parity of exactly one block per
// started pass, so the mismatch flag of each such block toggles.
void toggle_flags(const CascadeGeometry& geom, std::size_t started_passes,
                  std::size_t real_pos, std::set<BlockRef>& pending) {
    for (std::size_t pass = 0; pass < started_passes; ++pass) {
        BlockRef key{pass, geom.block_of(pass, real_pos)};
        auto it = pending.find(key);
        if (it != pending.end()) {
            pending.erase(it);
        } else {
            pending.insert(key);
        }
    }
}

} // namespace

CascadeConfig::CascadeConfig(std::size_t passes, std::size_t initial_block_size,
                             std::vector<std::uint64_t> shuffle_seeds)
    : passes(passes),
      initial_block_size(initial_block_size),
      shuffle_seeds(std::move(shuffle_seeds)) {
    if (passes == 0) {
        throw std::invalid_argument("cascade needs at least one pass");
    }
    if (initial_block_size == 0) {
        throw std::invalid_argument("initial block size must be positive");
    }
    if (this->shuffle_seeds.size() != passes - 1) {
        throw std::invalid_argument(fmt::format(
            "{} passes need {} shuffle seeds, got {}", passes, passes - 1,
            this->shuffle_seeds.size()));
    }
}

std::size_t initial_block_size_for(double p_est) {
    if (!(p_est >= 0.0 && p_est < 0.5)) {
        throw std::invalid_argument(fmt::format(
            "error rate estimate must lie in [0, 0.5), got {}", p_est));
    }
    if (p_est < 0.73 / static_cast<double>(kMaxInitialBlockSize)) {
        return kMaxInitialBlockSize;
    }
    return static_cast<std::size_t>(std::ceil(0.73 / p_est));
}

int block_parity(const BitString& bits, std::size_t lo, std::size_t hi) {
    if (lo > hi || hi > bits.size()) {
        throw std::out_of_range(fmt::format(
            "block [{}, {}) out of range for {} bits", lo, hi, bits.size()));
    }
    int parity = 0;
    for (std::size_t i = lo; i < hi; ++i) parity ^= bits[i];
    return parity;
}

std::vector<std::size_t> seeded_shuffle(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Prng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::size_t binary_search_correct(const ParityResponder& a_view,
                                  BitString& b_bits, std::size_t lo,
                                  std::size_t hi,
                                  std::vector<BitString>& msgs) {
    if (lo >= hi || hi > b_bits.size()) {
        throw std::out_of_range(fmt::format(
            "search block [{}, {}) out of range for {} bits", lo, hi,
            b_bits.size()));
    }
    while (hi - lo > 1) {
        std::size_t mid = search_mid(lo, hi);
        int a_left = a_view(lo, mid);
        int b_left = block_parity(b_bits, lo, mid);
        msgs.push_back(BitString(1, a_left));
        msgs.push_back(BitString(1, b_left));
        if (a_left != b_left) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    b_bits.flip(lo);
    return lo;
}

CascadeGeometry::CascadeGeometry(std::size_t n, const CascadeConfig& config)
    : n(n), passes(config.passes), initial_block_size(config.initial_block_size) {
    perms.reserve(passes);
    inv_perms.reserve(passes);
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    perms.push_back(identity);
    inv_perms.push_back(std::move(identity));
    for (std::size_t pass = 1; pass < passes; ++pass) {
        perms.push_back(seeded_shuffle(n, config.shuffle_seeds[pass - 1]));
        std::vector<std::size_t> inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[perms[pass][i]] = i;
        inv_perms.push_back(std::move(inv));
    }
}

std::size_t CascadeGeometry::block_size(std::size_t pass) const {
    std::size_t size = initial_block_size;
    for (std::size_t i = 0; i < pass && size < n; ++i) size *= 2;
    return size;
}

std::size_t CascadeGeometry::block_count(std::size_t pass) const {
    if (n == 0) return 0;
    std::size_t size = block_size(pass);
    return (n + size - 1) / size;
}

std::pair<std::size_t, std::size_t> CascadeGeometry::block_range(
    std::size_t pass, std::size_t block) const {
    std::size_t size = block_size(pass);
    std::size_t lo = block * size;
    return {lo, std::min(n, lo + size)};
}

std::size_t CascadeGeometry::block_of(std::size_t pass,
                                      std::size_t real_pos) const {
    return inv_perms[pass][real_pos] / block_size(pass);
}

int CascadeGeometry::parity(const BitString& bits, std::size_t pass,
                            std::size_t lo, std::size_t hi) const {
    int parity = 0;
    const std::vector<std::size_t>& perm = perms[pass];
    for (std::size_t i = lo; i < hi; ++i) parity ^= bits[perm[i]];
    return parity;
}

CascadeResponder::CascadeResponder(BitString reference_bits,
                                   const CascadeConfig& config)
    : bits_(std::move(reference_bits)),
      geom_(bits_.size(), config),
      flip_cap_(flip_budget(bits_.size())) {}

BitString CascadeResponder::initial_message() {
    if (state_ != State::Start) {
        throw std::logic_error("cascade responder already started");
    }
    state_ = State::ExpectBitmap;
    pass_index_ = 0;
    return pass_parities(0);
}

BitString CascadeResponder::pass_parities(std::size_t pass) const {
    std::size_t blocks = geom_.block_count(pass);
    BitString out(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        auto [lo, hi] = geom_.block_range(pass, b);
        out.set(b, geom_.parity(bits_, pass, lo, hi));
    }
    return out;
}

CascadeStep CascadeResponder::fail() {
    state_ = State::Failed;
    return {CascadeStep::Kind::Fail, BitString{}};
}

bool CascadeResponder::record_flip(std::size_t real_pos) {
    if (flips_.size() >= flip_cap_) return false;
    flips_.push_back(real_pos);
    toggle_flags(geom_, pass_index_ + 1, real_pos, pending_);
    return true;
}

CascadeStep CascadeResponder::advance() {
    while (true) {
        if (!pending_.empty()) {
            auto [pass, block] = *pending_.begin();
            auto [lo, hi] = geom_.block_range(pass, block);
            if (hi - lo == 1) {
                if (!record_flip(geom_.perms[pass][lo])) return fail();
                continue;
            }
            search_active_ = true;
            cur_pass_ = pass;
            cur_lo_ = lo;
            cur_hi_ = hi;
            sent_left_parity_ =
                geom_.parity(bits_, pass, lo, search_mid(lo, hi));
            state_ = State::ExpectLevelReply;
            return {CascadeStep::Kind::Reply, BitString(1, sent_left_parity_)};
        }
        if (pass_index_ + 1 < geom_.passes) {
            ++pass_index_;
            state_ = State::ExpectBitmap;
            return {CascadeStep::Kind::Reply, pass_parities(pass_index_)};
        }
        state_ = State::Done;
        return {CascadeStep::Kind::Done, BitString{}};
    }
}

CascadeStep CascadeResponder::on_message(const BitString& from_peer) {
    switch (state_) {
    case State::ExpectBitmap: {
        std::size_t blocks = geom_.block_count(pass_index_);
        if (from_peer.size() != 0 && from_peer.size() != blocks) return fail();
        for (std::size_t b = 0; b < from_peer.size(); ++b) {
            if (from_peer[b]) pending_.insert({pass_index_, b});
        }
        return advance();
    }
    case State::ExpectLevelReply: {
        if (from_peer.size() != 1 || !search_active_) return fail();
        std::size_t mid = search_mid(cur_lo_, cur_hi_);
        if (sent_left_parity_ != from_peer[0]) {
            cur_hi_ = mid;
        } else {
            cur_lo_ = mid;
        }
        if (cur_hi_ - cur_lo_ == 1) {
            search_active_ = false;
            if (!record_flip(geom_.perms[cur_pass_][cur_lo_])) return fail();
            return advance();
        }
        sent_left_parity_ = geom_.parity(bits_, cur_pass_, cur_lo_,
                                         search_mid(cur_lo_, cur_hi_));
        return {CascadeStep::Kind::Reply, BitString(1, sent_left_parity_)};
    }
    default:
        return fail();
    }
}

CascadeCorrector::CascadeCorrector(BitString bits, const CascadeConfig& config)
    : bits_(std::move(bits)),
      geom_(bits_.size(), config),
      flip_cap_(flip_budget(bits_.size())) {}

CascadeStep CascadeCorrector::fail() {
    state_ = State::Failed;
    return {CascadeStep::Kind::Fail, BitString{}};
}

void CascadeCorrector::apply_flip(std::size_t real_pos) {
    if (flips_.size() >= flip_cap_) {
        flip_budget_blown_ = true;
        return;
    }
    bits_.flip(real_pos);
    flips_.push_back(real_pos);
    toggle_flags(geom_, pass_index_ + 1, real_pos, pending_);
}

void CascadeCorrector::advance() {
    while (true) {
        if (flip_budget_blown_) {
            state_ = State::Failed;
            return;
        }
        if (!pending_.empty()) {
            auto [pass, block] = *pending_.begin();
            auto [lo, hi] = geom_.block_range(pass, block);
            if (hi - lo == 1) {
                apply_flip(geom_.perms[pass][lo]);
                continue;
            }
            search_active_ = true;
            cur_pass_ = pass;
            cur_lo_ = lo;
            cur_hi_ = hi;
            state_ = State::ExpectLevelBit;
            return;
        }
        if (pass_index_ + 1 < geom_.passes) {
            ++pass_index_;
            state_ = State::ExpectPassVector;
            return;
        }
        state_ = State::Done;
        return;
    }
}

CascadeStep CascadeCorrector::on_message(const BitString& from_peer) {
    switch (state_) {
    case State::ExpectPassVector: {
        std::size_t blocks = geom_.block_count(pass_index_);
        if (from_peer.size() != blocks) return fail();
        BitString bitmap(blocks);
        bool any = false;
        for (std::size_t b = 0; b < blocks; ++b) {
            auto [lo, hi] = geom_.block_range(pass_index_, b);
            if (geom_.parity(bits_, pass_index_, lo, hi) != from_peer[b]) {
                bitmap.set(b, 1);
                pending_.insert({pass_index_, b});
                any = true;
            }
        }
        BitString reply = any ? bitmap : BitString{};
        advance();
        if (state_ == State::Failed) return fail();
        return {CascadeStep::Kind::Reply, reply};
    }
    case State::ExpectLevelBit: {
        if (from_peer.size() != 1 || !search_active_) return fail();
        std::size_t mid = search_mid(cur_lo_, cur_hi_);
        int mine = geom_.parity(bits_, cur_pass_, cur_lo_, mid);
        BitString reply(1, mine);
        if (from_peer[0] != mine) {
            cur_hi_ = mid;
        } else {
            cur_lo_ = mid;
        }
        if (cur_hi_ - cur_lo_ == 1) {
            search_active_ = false;
            apply_flip(geom_.perms[cur_pass_][cur_lo_]);
            advance();
            if (state_ == State::Failed) return fail();
        }
        return {CascadeStep::Kind::Reply, reply};
    }
    default:
        return fail();
    }
}

ReconciliationResult run_cascade(const BitString& a_bits,
                                 const BitString& b_bits,
                                 const CascadeConfig& config) {
    if (a_bits.size() != b_bits.size()) {
        throw std::invalid_argument(fmt::format(
            "input lengths differ: {} vs {}", a_bits.size(), b_bits.size()));
    }
    CascadeResponder responder(a_bits, config);
    CascadeCorrector corrector(b_bits, config);
    ReconciliationResult result;
    BitString msg = responder.initial_message();
    result.parity_msgs.push_back(msg);
    while (true) {
        CascadeStep reply = corrector.on_message(msg);
        if (reply.kind != CascadeStep::Kind::Reply) {
            throw std::logic_error(
                "cascade corrector failed against an honest responder");
        }
        result.parity_msgs.push_back(reply.message);
        CascadeStep next = responder.on_message(reply.message);
        if (next.kind == CascadeStep::Kind::Done) break;
        if (next.kind != CascadeStep::Kind::Reply) {
            throw std::logic_error(
                "cascade responder failed against an honest corrector");
        }
        msg = next.message;
        result.parity_msgs.push_back(msg);
    }
    result.corrected_b = corrector.bits();
    for (const BitString& m : result.parity_msgs) {
        result.bits_leaked += m.size();
    }
    return result;
}

CascadeReplay replay_cascade_messages(std::size_t n,
                                      const CascadeConfig& config,
                                      const std::vector<BitString>& msgs,
                                      std::size_t offset) {
    CascadeGeometry geom(n, config);
    std::set<BlockRef> pending;
    std::vector<std::size_t> flips;
    const std::size_t cap = flip_budget(n);
    std::size_t i = offset;
    std::size_t pass_index = 0;
    bool search_active = false;
    std::size_t cur_pass = 0;
    std::size_t cur_lo = 0;
    std::size_t cur_hi = 0;

    auto take = [&](const char* what) -> const BitString& {
        if (i >= msgs.size()) {
            throw std::invalid_argument(fmt::format(
                "cascade replay ran out of messages expecting {}", what));
        }
        return msgs[i++];
    };
    auto flip_at = [&](std::size_t pos) {
        if (flips.size() >= cap) {
            throw std::invalid_argument("cascade replay exceeded the flip budget");
        }
        flips.push_back(pos);
        toggle_flags(geom, pass_index + 1, pos, pending);
    };
    auto read_pass = [&]() {
        if (take("pass parity vector").size() != geom.block_count(pass_index)) {
            throw std::invalid_argument("pass vector length mismatch in replay");
        }
        const BitString& bitmap = take("mismatch bitmap");
        if (bitmap.size() != 0 &&
            bitmap.size() != geom.block_count(pass_index)) {
            throw std::invalid_argument("mismatch bitmap length mismatch in replay");
        }
        for (std::size_t b = 0; b < bitmap.size(); ++b) {
            if (bitmap[b]) pending.insert({pass_index, b});
        }
    };

    read_pass();
    while (true) {
        if (search_active) {
            std::size_t mid = search_mid(cur_lo, cur_hi);
            const BitString& a_left = take("responder parity bit");
            const BitString& b_left = take("corrector parity bit");
            if (a_left.size() != 1 || b_left.size() != 1) {
                throw std::invalid_argument("malformed search bit in replay");
            }
            if (a_left[0] != b_left[0]) {
                cur_hi = mid;
            } else {
                cur_lo = mid;
            }
            if (cur_hi - cur_lo == 1) {
                search_active = false;
                flip_at(geom.perms[cur_pass][cur_lo]);
            }
            continue;
        }
        if (!pending.empty()) {
            auto [pass, block] = *pending.begin();
            auto [lo, hi] = geom.block_range(pass, block);
            if (hi - lo == 1) {
                flip_at(geom.perms[pass][lo]);
                continue;
            }
            search_active = true;
            cur_pass = pass;
            cur_lo = lo;
            cur_hi = hi;
            continue;
        }
        if (pass_index + 1 < config.passes) {
            ++pass_index;
            read_pass();
            continue;
        }
        break;
    }
    return CascadeReplay{std::move(flips), i - offset};
}

std::vector<std::size_t> derive_flips_from_messages(
    std::size_t n, const CascadeConfig& config,
    const std::vector<BitString>& msgs) {
    CascadeReplay replay = replay_cascade_messages(n, config, msgs, 0);
    if (replay.messages_consumed != msgs.size()) {
        throw std::invalid_argument("unconsumed trailing cascade messages in replay");
    }
    return replay.flips;
}

} // namespace ska
