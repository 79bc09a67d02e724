#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace chaincluster {

// One Bitcoin transaction: address/satoshi pairs on each side. Coinbase
// transactions have zero inputs.
struct TxRecord {
  std::int64_t tx_id = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> inputs;
  std::vector<std::pair<std::int64_t, std::int64_t>> outputs;

  bool operator==(const TxRecord&) const = default;
};

// Maps source columns to the (tx_id, addr_id, amount) triple. The canonical
// dump format is exactly `tx_id addr_id amount` per line; raw dumps with
// extra columns can remap via a key-value file (`tx_id 0`, `addr_id 2`, ...).
struct ColumnMap {
  int tx_id = 0;
  int addr_id = 1;
  int amount = 2;
  bool exact_arity = true;  // canonical layout rejects extra fields

  static ColumnMap parse(std::istream& source);
};

// Whitespace-separated integer triples, grouped or ungrouped by tx_id.
// Returns one record per distinct tx_id, sorted by tx_id, with per-side
// entries in file order. A tx_id present in only one file yields a record
// with the other side empty.
std::vector<TxRecord> parse_tx_files(std::istream& txin_source,
                                     std::istream& txout_source,
                                     const ColumnMap& columns = {});

// Canonical-format writer; parse_tx_files(serialize(txs)) == txs for
// records sorted by tx_id.
void serialize_tx_files(const std::vector<TxRecord>& txs,
                        std::ostream& txin_sink, std::ostream& txout_sink);

// Union-find forest over address ids. Addresses never mentioned are
// singletons on demand. Only the resulting partition is contractual; root
// choice is an implementation detail, use canonical_map() for stable ids.
class AddressPartition {
 public:
  std::int64_t find(std::int64_t addr) const;
  void unite(std::int64_t a, std::int64_t b);
  bool same(std::int64_t a, std::int64_t b) const;
  std::int64_t group_size(std::int64_t addr) const;
  std::size_t known_addresses() const { return parent_.size(); }

  // member -> smallest member of its group, for every address ever touched.
  // The smallest member is stable under union order, which makes it the
  // super-address id used everywhere downstream.
  std::unordered_map<std::int64_t, std::int64_t> canonical_map() const;

  // merge the groups of another partition into this one
  void absorb(const AddressPartition& other);

 private:
  mutable std::unordered_map<std::int64_t, std::int64_t> parent_;
  std::unordered_map<std::int64_t, std::int64_t> size_;
};

// Snapshot of a partition's canonical ids with identity fallback for
// addresses the partition has never seen.
class SuperResolver {
 public:
  explicit SuperResolver(const AddressPartition& partition)
      : canonical_(partition.canonical_map()) {}

  std::int64_t super_of(std::int64_t addr) const {
    auto it = canonical_.find(addr);
    return it == canonical_.end() ? addr : it->second;
  }

 private:
  std::unordered_map<std::int64_t, std::int64_t> canonical_;
};

// Lines of `addr_id user_id`: addresses sharing a user id share a group.
// An address listed under two user ids merges both groups.
AddressPartition parse_contraction(std::istream& source);

// Common-spend heuristic: all input addresses of one transaction belong to
// one owner. The result is the transitive closure over all transactions and
// does not depend on transaction order.
AddressPartition associate_common_spend(const std::vector<TxRecord>& txs);

// One-time-change heuristic, applied on top of a common-spend partition.
// For a transaction with inputs and exactly two outputs, an output address
// that occurs exactly once in the whole dataset and never as an input joins
// the sender's group; two such outputs are ambiguous and skipped. Never
// splits existing groups.
AddressPartition associate_change_address(const std::vector<TxRecord>& txs,
                                          AddressPartition partition);

// Transactions a super-address appears in (input or output side), counted
// per distinct transaction.
struct OccurrenceIndex {
  std::unordered_map<std::int64_t, std::int64_t> count;
};

OccurrenceIndex build_occurrence_index(const std::vector<TxRecord>& txs,
                                       const AddressPartition& partition);

struct FilterResult {
  std::vector<TxRecord> txs;  // surviving slots only
  std::unordered_set<std::int64_t> surviving;
};

// Drops super-addresses occurring in fewer than min_occ transactions, then
// keeps only transactions still connecting at least two surviving
// super-addresses (this also drops self-churn inside one super-address).
FilterResult filter_by_occurrence(const std::vector<TxRecord>& txs,
                                  const AddressPartition& partition,
                                  std::int64_t min_occ);

}  // namespace chaincluster
