#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmatch/errors.hpp"

namespace cmatch {

// A set of contracts, represented as a bitmask over contract indices.
// Markets are capped at 64 contracts, which is far beyond what the
// exhaustive machinery in this project can chew through anyway.
class ContractSet {
public:
    constexpr ContractSet() = default;
    constexpr explicit ContractSet(std::uint64_t bits) : bits_(bits) {}

    static constexpr ContractSet single(int index) { return ContractSet(std::uint64_t{1} << index); }

    constexpr bool empty() const { return bits_ == 0; }
    int size() const { return __builtin_popcountll(bits_); }
    constexpr bool contains(int index) const { return (bits_ >> index) & 1; }
    constexpr bool subset_of(ContractSet other) const { return (bits_ & ~other.bits_) == 0; }

    constexpr ContractSet with(int index) const { return ContractSet(bits_ | (std::uint64_t{1} << index)); }
    constexpr ContractSet without(int index) const { return ContractSet(bits_ & ~(std::uint64_t{1} << index)); }

    friend constexpr ContractSet operator|(ContractSet a, ContractSet b) { return ContractSet(a.bits_ | b.bits_); }
    friend constexpr ContractSet operator&(ContractSet a, ContractSet b) { return ContractSet(a.bits_ & b.bits_); }
    friend constexpr ContractSet operator-(ContractSet a, ContractSet b) { return ContractSet(a.bits_ & ~b.bits_); }
    ContractSet& operator|=(ContractSet o) { bits_ |= o.bits_; return *this; }
    ContractSet& operator&=(ContractSet o) { bits_ &= o.bits_; return *this; }

    friend constexpr bool operator==(ContractSet a, ContractSet b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator!=(ContractSet a, ContractSet b) { return a.bits_ != b.bits_; }
    // Numeric mask order; used as the canonical order on sets throughout.
    friend constexpr bool operator<(ContractSet a, ContractSet b) { return a.bits_ < b.bits_; }

    constexpr std::uint64_t bits() const { return bits_; }

    // Lowest contract index in the set; set must be nonempty.
    int first() const { return __builtin_ctzll(bits_); }

    // Ascending contract indices.
    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint64_t b = bits_; b != 0; b &= b - 1)
            out.push_back(__builtin_ctzll(b));
        return out;
    }

private:
    std::uint64_t bits_ = 0;
};

struct Contract {
    std::string id;
    std::string doctor;
    std::string hospital;
};

// The outcome a single doctor receives from a rule: one contract or nothing.
class DoctorOutcome {
public:
    constexpr DoctorOutcome() = default;  // unmatched
    static constexpr DoctorOutcome matched(int contract_index) { return DoctorOutcome(contract_index); }
    static constexpr DoctorOutcome unmatched() { return DoctorOutcome(); }

    constexpr bool is_matched() const { return contract_ >= 0; }
    constexpr int contract() const { return contract_; }  // -1 when unmatched

    friend constexpr bool operator==(DoctorOutcome a, DoctorOutcome b) { return a.contract_ == b.contract_; }
    friend constexpr bool operator!=(DoctorOutcome a, DoctorOutcome b) { return a.contract_ != b.contract_; }
    friend constexpr bool operator<(DoctorOutcome a, DoctorOutcome b) { return a.contract_ < b.contract_; }

private:
    constexpr explicit DoctorOutcome(int c) : contract_(c) {}
    int contract_ = -1;
};

class Market;

// A doctor's strict preference, listed as the acceptable contracts only,
// most-preferred first. Own contracts not listed are strictly worse than
// staying unmatched.
struct DoctorPreference {
    int doctor = -1;
    std::vector<int> acceptable;

    bool accepts(int contract) const {
        for (int c : acceptable)
            if (c == contract) return true;
        return false;
    }
    // Position in the list; acceptable.size() if absent.
    int position_of(int contract) const {
        for (std::size_t i = 0; i < acceptable.size(); ++i)
            if (acceptable[i] == contract) return static_cast<int>(i);
        return static_cast<int>(acceptable.size());
    }

    friend bool operator==(const DoctorPreference&, const DoctorPreference&) = default;
};

// A hospital's complete strict ranking over all allocations drawn from its
// own contracts, most-preferred first. Completeness is validated when the
// preference is attached to a market.
struct HospitalPreference {
    int hospital = -1;
    ContractSet domain;                 // X_h
    std::vector<ContractSet> ranking;   // every member of A(X_h) exactly once

    // Rank by position, 0 = best. DomainError if `alloc` is not ranked.
    int rank_of(ContractSet alloc) const {
        auto it = rank_.find(alloc.bits());
        if (it == rank_.end())
            throw DomainError("allocation is not ranked by this hospital");
        return it->second;
    }
    bool ranks(ContractSet alloc) const { return rank_.count(alloc.bits()) != 0; }
    bool prefers(ContractSet a, ContractSet b) const { return rank_of(a) < rank_of(b); }

    void rebuild_rank_index();

    friend bool operator==(const HospitalPreference& a, const HospitalPreference& b) {
        return a.hospital == b.hospital && a.domain == b.domain && a.ranking == b.ranking;
    }

private:
    std::unordered_map<std::uint64_t, int> rank_;
};

// One DoctorPreference per doctor, indexed by doctor index.
struct DoctorProfile {
    std::vector<DoctorPreference> prefs;

    const DoctorPreference& of(int doctor) const { return prefs[static_cast<std::size_t>(doctor)]; }
    friend bool operator==(const DoctorProfile&, const DoctorProfile&) = default;
};

// Immutable market: doctors, hospitals, the universal contract set and the
// fixed, publicly known hospital preferences. Contracts are indexed in
// ascending id order, so mask order equals id order everywhere.
class Market {
public:
    static Market create(std::vector<std::string> doctors,
                         std::vector<std::string> hospitals,
                         std::vector<Contract> contracts,
                         std::vector<HospitalPreference> hospital_prefs);

    int num_doctors() const { return static_cast<int>(doctors_.size()); }
    int num_hospitals() const { return static_cast<int>(hospitals_.size()); }
    int num_contracts() const { return static_cast<int>(contracts_.size()); }

    const std::vector<std::string>& doctors() const { return doctors_; }
    const std::vector<std::string>& hospitals() const { return hospitals_; }
    const std::vector<Contract>& contracts() const { return contracts_; }

    const std::string& doctor_id(int d) const { return doctors_[static_cast<std::size_t>(d)]; }
    const std::string& hospital_id(int h) const { return hospitals_[static_cast<std::size_t>(h)]; }
    const std::string& contract_id(int c) const { return contracts_[static_cast<std::size_t>(c)].id; }

    int doctor_index(const std::string& id) const;      // DomainError if unknown
    int hospital_index(const std::string& id) const;    // DomainError if unknown
    int contract_index(const std::string& id) const;    // DomainError if unknown

    int doctor_of(int contract) const { return doctor_of_[static_cast<std::size_t>(contract)]; }
    int hospital_of(int contract) const { return hospital_of_[static_cast<std::size_t>(contract)]; }

    ContractSet full_set() const { return full_; }
    ContractSet contracts_of_doctor(int d) const { return by_doctor_[static_cast<std::size_t>(d)]; }
    ContractSet contracts_of_hospital(int h) const { return by_hospital_[static_cast<std::size_t>(h)]; }

    const HospitalPreference& hospital_pref(int h) const { return prefs_[static_cast<std::size_t>(h)]; }
    const std::vector<HospitalPreference>& hospital_prefs() const { return prefs_; }

    // True when `set` holds at most one contract per doctor.
    bool is_allocation(ContractSet set) const;

    // Stable fingerprint of the whole market (ids, endpoints, rankings).
    std::string digest() const;

    // Resolve a doctor profile given acceptable-contract id lists.
    DoctorPreference make_preference(const std::string& doctor,
                                     const std::vector<std::string>& acceptable_ids) const;

private:
    Market() = default;

    std::vector<std::string> doctors_;
    std::vector<std::string> hospitals_;
    std::vector<Contract> contracts_;
    std::vector<HospitalPreference> prefs_;
    std::vector<int> doctor_of_;
    std::vector<int> hospital_of_;
    std::vector<ContractSet> by_doctor_;
    std::vector<ContractSet> by_hospital_;
    ContractSet full_;
    std::unordered_map<std::string, int> doctor_index_;
    std::unordered_map<std::string, int> hospital_index_;
    std::unordered_map<std::string, int> contract_index_;
};

// A market together with named doctor profiles, as loaded from a market
// file or produced by a built-in scenario.
struct MarketBundle {
    Market market;
    std::vector<std::pair<std::string, DoctorProfile>> profiles;  // sorted by name

    const DoctorProfile& profile(const std::string& name) const;
};

// ---- choice-set primitives ----

// Contracts of `set` involving the named agent (doctor or hospital side).
ContractSet restrict(const Market& market, ContractSet set, const std::string& agent);

// All allocations that are subsets of `set`, in ascending mask order.
// Always contains the empty allocation.
std::vector<ContractSet> allocations_of(const Market& market, ContractSet set);

// Count of the above without materializing it.
std::uint64_t count_allocations_of(const Market& market, ContractSet set);

// The doctor's single best acceptable contract available in `set`, if any.
DoctorOutcome choice_doctor(const DoctorPreference& pref, ContractSet set);

// The hospital's best-ranked allocation drawn from `set`.
ContractSet choice_hospital(const HospitalPreference& pref, ContractSet set);

// C_D: union over doctors of their chosen contracts.
ContractSet choice_doctors_all(const Market& market, const DoctorProfile& profile, ContractSet set);

// C_H: union over hospitals of their chosen allocations.
ContractSet choice_hospitals_all(const Market& market, ContractSet set);

// ---- outcome comparison under a doctor preference ----

// How contracts below the unmatched outcome are totalized. The choice never
// affects any verdict produced by this library (asserted by tests); it only
// fixes a deterministic order.
enum class UnacceptableOrder { id_ascending, id_descending };

// Comparison of doctor outcomes under a (true) preference:
// acceptable contracts by list position, then unmatched, then everything
// else. `better(a, b)` is strict.
class OutcomeComparer {
public:
    OutcomeComparer(const DoctorPreference& pref, int num_contracts,
                    UnacceptableOrder order = UnacceptableOrder::id_ascending);

    bool better(DoctorOutcome a, DoctorOutcome b) const { return score(a) < score(b); }
    bool worse(DoctorOutcome a, DoctorOutcome b) const { return score(a) > score(b); }

    // Lower is better; unmatched scores len(acceptable).
    int score(DoctorOutcome o) const {
        if (!o.is_matched()) return unmatched_score_;
        return scores_[static_cast<std::size_t>(o.contract())];
    }

private:
    std::vector<int> scores_;
    int unmatched_score_;
};

std::string to_string(const Market& market, ContractSet set);
std::string to_string(const Market& market, DoctorOutcome outcome);

}  // namespace cmatch
