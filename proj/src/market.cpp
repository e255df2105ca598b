#include "cmatch/market.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cmatch {

void HospitalPreference::rebuild_rank_index() {
    rank_.clear();
    rank_.reserve(ranking.size());
    for (std::size_t i = 0; i < ranking.size(); ++i)
        rank_.emplace(ranking[i].bits(), static_cast<int>(i));
}

namespace {

template <typename T>
void require_unique_sorted(std::vector<T>& v, const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw InputError(std::string("duplicate ") + what + " id");
}

}  // namespace

Market Market::create(std::vector<std::string> doctors,
                      std::vector<std::string> hospitals,
                      std::vector<Contract> contracts,
                      std::vector<HospitalPreference> hospital_prefs) {
    Market m;
    require_unique_sorted(doctors, "doctor");
    require_unique_sorted(hospitals, "hospital");
    std::sort(contracts.begin(), contracts.end(),
              [](const Contract& a, const Contract& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < contracts.size(); ++i)
        if (contracts[i].id == contracts[i - 1].id)
            throw InputError("duplicate contract id '" + contracts[i].id + "'");
    if (contracts.size() > 64)
        throw InputError("markets with more than 64 contracts are not supported");

    m.doctors_ = std::move(doctors);
    m.hospitals_ = std::move(hospitals);
    m.contracts_ = std::move(contracts);
    for (std::size_t i = 0; i < m.doctors_.size(); ++i)
        m.doctor_index_.emplace(m.doctors_[i], static_cast<int>(i));
    for (std::size_t i = 0; i < m.hospitals_.size(); ++i)
        m.hospital_index_.emplace(m.hospitals_[i], static_cast<int>(i));
    for (std::size_t i = 0; i < m.contracts_.size(); ++i)
        m.contract_index_.emplace(m.contracts_[i].id, static_cast<int>(i));

    m.by_doctor_.assign(m.doctors_.size(), ContractSet());
    m.by_hospital_.assign(m.hospitals_.size(), ContractSet());
    for (std::size_t i = 0; i < m.contracts_.size(); ++i) {
        const Contract& c = m.contracts_[i];
        auto d = m.doctor_index_.find(c.doctor);
        if (d == m.doctor_index_.end())
            throw InputError("contract '" + c.id + "' names unknown doctor '" + c.doctor + "'");
        auto h = m.hospital_index_.find(c.hospital);
        if (h == m.hospital_index_.end())
            throw InputError("contract '" + c.id + "' names unknown hospital '" + c.hospital + "'");
        m.doctor_of_.push_back(d->second);
        m.hospital_of_.push_back(h->second);
        m.by_doctor_[static_cast<std::size_t>(d->second)] |= ContractSet::single(static_cast<int>(i));
        m.by_hospital_[static_cast<std::size_t>(h->second)] |= ContractSet::single(static_cast<int>(i));
        m.full_ |= ContractSet::single(static_cast<int>(i));
    }

    // Every hospital needs exactly one preference, complete over A(X_h).
    if (hospital_prefs.size() != m.hospitals_.size())
        throw InputError("hospital preferences must cover every hospital exactly once");
    m.prefs_.resize(m.hospitals_.size());
    std::vector<bool> seen(m.hospitals_.size(), false);
    for (auto& pref : hospital_prefs) {
        if (pref.hospital < 0 || pref.hospital >= m.num_hospitals())
            throw InputError("hospital preference names an unknown hospital");
        auto h = static_cast<std::size_t>(pref.hospital);
        if (seen[h])
            throw InputError("two preferences given for hospital '" + m.hospitals_[h] + "'");
        seen[h] = true;

        ContractSet xh = m.by_hospital_[h];
        pref.domain = xh;
        std::uint64_t expected = count_allocations_of(m, xh);
        if (pref.ranking.size() != expected) {
            std::ostringstream os;
            os << "ranking for hospital '" << m.hospitals_[h] << "' lists "
               << pref.ranking.size() << " allocations but A(X_h) has " << expected;
            throw InputError(os.str());
        }
        std::set<std::uint64_t> distinct;
        for (ContractSet a : pref.ranking) {
            if (!a.subset_of(xh))
                throw InputError("ranked allocation for hospital '" + m.hospitals_[h] +
                                 "' contains a contract of another hospital");
            if (!m.is_allocation(a))
                throw InputError("ranked set for hospital '" + m.hospitals_[h] +
                                 "' holds two contracts of one doctor");
            if (!distinct.insert(a.bits()).second)
                throw InputError("ranking for hospital '" + m.hospitals_[h] +
                                 "' repeats an allocation");
        }
        pref.rebuild_rank_index();
        m.prefs_[h] = std::move(pref);
    }
    return m;
}

int Market::doctor_index(const std::string& id) const {
    auto it = doctor_index_.find(id);
    if (it == doctor_index_.end()) throw DomainError("unknown doctor '" + id + "'");
    return it->second;
}

int Market::hospital_index(const std::string& id) const {
    auto it = hospital_index_.find(id);
    if (it == hospital_index_.end()) throw DomainError("unknown hospital '" + id + "'");
    return it->second;
}

int Market::contract_index(const std::string& id) const {
    auto it = contract_index_.find(id);
    if (it == contract_index_.end()) throw DomainError("unknown contract '" + id + "'");
    return it->second;
}

bool Market::is_allocation(ContractSet set) const {
    for (ContractSet xd : by_doctor_)
        if ((set & xd).size() > 1) return false;
    return true;
}

std::string Market::digest() const {
    std::ostringstream os;
    os << "D:";
    for (const auto& d : doctors_) os << d << ';';
    os << "|H:";
    for (const auto& h : hospitals_) os << h << ';';
    os << "|X:";
    for (const auto& c : contracts_) os << c.id << ':' << c.doctor << ':' << c.hospital << ';';
    os << "|P:";
    for (const auto& p : prefs_) {
        os << hospitals_[static_cast<std::size_t>(p.hospital)] << '=';
        for (ContractSet a : p.ranking) {
            os << '[';
            for (int c : a.indices()) os << contracts_[static_cast<std::size_t>(c)].id << ',';
            os << ']';
        }
        os << ';';
    }
    std::uint64_t hash = 14695981039346656037ull;  // FNV-1a
    for (char ch : os.str()) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

DoctorPreference Market::make_preference(const std::string& doctor,
                                         const std::vector<std::string>& acceptable_ids) const {
    DoctorPreference pref;
    pref.doctor = doctor_index(doctor);
    for (const auto& id : acceptable_ids) {
        int c = contract_index(id);
        if (doctor_of(c) != pref.doctor)
            throw DomainError("contract '" + id + "' does not involve doctor '" + doctor + "'");
        if (pref.accepts(c))
            throw DomainError("contract '" + id + "' listed twice for doctor '" + doctor + "'");
        pref.acceptable.push_back(c);
    }
    return pref;
}

ContractSet restrict(const Market& market, ContractSet set, const std::string& agent) {
    auto d = std::find(market.doctors().begin(), market.doctors().end(), agent);
    if (d != market.doctors().end())
        return set & market.contracts_of_doctor(static_cast<int>(d - market.doctors().begin()));
    auto h = std::find(market.hospitals().begin(), market.hospitals().end(), agent);
    if (h != market.hospitals().end())
        return set & market.contracts_of_hospital(static_cast<int>(h - market.hospitals().begin()));
    throw DomainError("unknown agent '" + agent + "'");
}

std::vector<ContractSet> allocations_of(const Market& market, ContractSet set) {
    // Cartesian product of per-doctor options (nothing, or one own contract).
    std::vector<std::vector<int>> groups;
    for (int d = 0; d < market.num_doctors(); ++d) {
        ContractSet own = set & market.contracts_of_doctor(d);
        if (!own.empty()) groups.push_back(own.indices());
    }
    std::vector<ContractSet> out;
    out.push_back(ContractSet());
    for (const auto& g : groups) {
        std::size_t base = out.size();
        for (std::size_t i = 0; i < base; ++i)
            for (int c : g)
                out.push_back(out[i].with(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_allocations_of(const Market& market, ContractSet set) {
    std::uint64_t n = 1;
    for (int d = 0; d < market.num_doctors(); ++d) {
        ContractSet own = set & market.contracts_of_doctor(d);
        std::uint64_t factor = 1 + static_cast<std::uint64_t>(own.size());
        if (n > UINT64_MAX / factor)
            throw DomainError("allocation family too large to count");
        n *= factor;
    }
    return n;
}

DoctorOutcome choice_doctor(const DoctorPreference& pref, ContractSet set) {
    for (int c : pref.acceptable)
        if (set.contains(c)) return DoctorOutcome::matched(c);
    return DoctorOutcome::unmatched();
}

ContractSet choice_hospital(const HospitalPreference& pref, ContractSet set) {
    ContractSet available = set & pref.domain;
    for (ContractSet a : pref.ranking)
        if (a.subset_of(available)) return a;
    throw InternalError("hospital ranking does not contain the empty allocation");
}

ContractSet choice_doctors_all(const Market& market, const DoctorProfile& profile, ContractSet set) {
    ContractSet out;
    for (int d = 0; d < market.num_doctors(); ++d) {
        DoctorOutcome o = choice_doctor(profile.of(d), set & market.contracts_of_doctor(d));
        if (o.is_matched()) out |= ContractSet::single(o.contract());
    }
    return out;
}

ContractSet choice_hospitals_all(const Market& market, ContractSet set) {
    ContractSet out;
    for (int h = 0; h < market.num_hospitals(); ++h)
        out |= choice_hospital(market.hospital_pref(h), set);
    return out;
}

OutcomeComparer::OutcomeComparer(const DoctorPreference& pref, int num_contracts,
                                 UnacceptableOrder order) {
    int n = static_cast<int>(pref.acceptable.size());
    unmatched_score_ = n;
    scores_.assign(static_cast<std::size_t>(num_contracts), 0);
    for (int c = 0; c < num_contracts; ++c) {
        int tie = order == UnacceptableOrder::id_ascending ? c : num_contracts - 1 - c;
        scores_[static_cast<std::size_t>(c)] = n + 1 + tie;  // below unmatched
    }
    for (int i = 0; i < n; ++i)
        scores_[static_cast<std::size_t>(pref.acceptable[static_cast<std::size_t>(i)])] = i;
}

std::string to_string(const Market& market, ContractSet set) {
    std::string out = "{";
    bool first = true;
    for (int c : set.indices()) {
        if (!first) out += ",";
        out += market.contract_id(c);
        first = false;
    }
    return out + "}";
}

std::string to_string(const Market& market, DoctorOutcome outcome) {
    return outcome.is_matched() ? market.contract_id(outcome.contract()) : std::string("-");
}

}  // namespace cmatch
