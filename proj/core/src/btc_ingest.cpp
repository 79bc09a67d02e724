#include "chaincluster/btc_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "chaincluster/errors.hpp"

namespace chaincluster {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r'))
      ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r')
      ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

std::int64_t parse_int(std::string_view field, std::size_t line_number,
                       const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(std::string("expected integer ") + what + ", got '" +
                         std::string(field) + "'",
                     line_number);
  return value;
}

struct TxLine {
  std::int64_t tx_id;
  std::int64_t addr_id;
  std::int64_t amount;
};

// Parses one dump file into (tx_id, addr, amount) rows, file order kept.
std::vector<TxLine> parse_tx_lines(std::istream& source,
                                   const ColumnMap& columns) {
  const int needed =
      std::max({columns.tx_id, columns.addr_id, columns.amount}) + 1;
  std::vector<TxLine> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (static_cast<int>(fields.size()) < needed ||
        (columns.exact_arity && static_cast<int>(fields.size()) != needed))
      throw ParseError("expected " + std::to_string(needed) +
                           " fields, got " + std::to_string(fields.size()),
                       line_number);
    TxLine row{parse_int(fields[columns.tx_id], line_number, "tx_id"),
               parse_int(fields[columns.addr_id], line_number, "addr_id"),
               parse_int(fields[columns.amount], line_number, "amount")};
    if (row.amount < 0)
      throw ValidationError("negative amount on line " +
                            std::to_string(line_number));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ColumnMap ColumnMap::parse(std::istream& source) {
  ColumnMap map;
  map.exact_arity = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    std::replace(line.begin(), line.end(), '=', ' ');
    const auto fields = split_fields(line);
    if (fields.empty() || fields[0].starts_with('#')) continue;
    if (fields.size() != 2)
      throw ParseError("expected 'name index'", line_number);
    const int index =
        static_cast<int>(parse_int(fields[1], line_number, "column index"));
    if (index < 0) throw ParseError("column index must be >= 0", line_number);
    if (fields[0] == "tx_id") {
      map.tx_id = index;
    } else if (fields[0] == "addr_id") {
      map.addr_id = index;
    } else if (fields[0] == "amount") {
      map.amount = index;
    } else {
      throw ParseError("unknown column name '" + std::string(fields[0]) + "'",
                       line_number);
    }
  }
  return map;
}

std::vector<TxRecord> parse_tx_files(std::istream& txin_source,
                                     std::istream& txout_source,
                                     const ColumnMap& columns) {
  const auto in_rows = parse_tx_lines(txin_source, columns);
  const auto out_rows = parse_tx_lines(txout_source, columns);

  std::map<std::int64_t, TxRecord> by_id;
  for (const auto& row : in_rows) {
    TxRecord& record = by_id[row.tx_id];
    record.tx_id = row.tx_id;
    record.inputs.emplace_back(row.addr_id, row.amount);
  }
  for (const auto& row : out_rows) {
    TxRecord& record = by_id[row.tx_id];
    record.tx_id = row.tx_id;
    record.outputs.emplace_back(row.addr_id, row.amount);
  }

  std::vector<TxRecord> records;
  records.reserve(by_id.size());
  for (auto& [id, record] : by_id) records.push_back(std::move(record));
  return records;
}

void serialize_tx_files(const std::vector<TxRecord>& txs,
                        std::ostream& txin_sink, std::ostream& txout_sink) {
  for (const TxRecord& tx : txs) {
    for (const auto& [addr, amount] : tx.inputs)
      txin_sink << tx.tx_id << ' ' << addr << ' ' << amount << '\n';
    for (const auto& [addr, amount] : tx.outputs)
      txout_sink << tx.tx_id << ' ' << addr << ' ' << amount << '\n';
  }
}

std::int64_t AddressPartition::find(std::int64_t addr) const {
  auto it = parent_.find(addr);
  if (it == parent_.end()) {
    parent_.emplace(addr, addr);
    return addr;
  }
  // path halving
  std::int64_t x = addr;
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void AddressPartition::unite(std::int64_t a, std::int64_t b) {
  std::int64_t ra = find(a);
  std::int64_t rb = find(b);
  if (ra == rb) return;
  std::int64_t sa = group_size(ra);
  std::int64_t sb = group_size(rb);
  // size-weighted, ties to the smaller id so merges stay deterministic
  if (sa < sb || (sa == sb && rb < ra)) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] = sa + sb;
  size_.erase(rb);
}

bool AddressPartition::same(std::int64_t a, std::int64_t b) const {
  return find(a) == find(b);
}

std::int64_t AddressPartition::group_size(std::int64_t addr) const {
  auto it = size_.find(find(addr));
  return it == size_.end() ? 1 : it->second;
}

std::unordered_map<std::int64_t, std::int64_t>
AddressPartition::canonical_map() const {
  std::unordered_map<std::int64_t, std::int64_t> smallest;
  smallest.reserve(parent_.size());
  for (const auto& [member, unused] : parent_) {
    const std::int64_t root = find(member);
    auto [it, inserted] = smallest.try_emplace(root, member);
    if (!inserted) it->second = std::min(it->second, member);
  }
  std::unordered_map<std::int64_t, std::int64_t> canonical;
  canonical.reserve(parent_.size());
  for (const auto& [member, unused] : parent_)
    canonical[member] = smallest[find(member)];
  return canonical;
}

void AddressPartition::absorb(const AddressPartition& other) {
  for (const auto& [member, canon] : other.canonical_map()) unite(member, canon);
}

AddressPartition parse_contraction(std::istream& source) {
  AddressPartition partition;
  std::unordered_map<std::int64_t, std::int64_t> user_anchor;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw ParseError("expected 'addr_id user_id'", line_number);
    const std::int64_t addr = parse_int(fields[0], line_number, "addr_id");
    const std::int64_t user = parse_int(fields[1], line_number, "user_id");
    auto [it, inserted] = user_anchor.try_emplace(user, addr);
    partition.unite(addr, it->second);
  }
  return partition;
}

AddressPartition associate_common_spend(const std::vector<TxRecord>& txs) {
  AddressPartition partition;
  for (const TxRecord& tx : txs) {
    for (std::size_t i = 1; i < tx.inputs.size(); ++i)
      partition.unite(tx.inputs[0].first, tx.inputs[i].first);
    if (tx.inputs.size() == 1) partition.find(tx.inputs[0].first);
  }
  return partition;
}

AddressPartition associate_change_address(const std::vector<TxRecord>& txs,
                                          AddressPartition partition) {
  // frozen slot counts over the whole dataset
  std::unordered_map<std::int64_t, std::int64_t> input_slots;
  std::unordered_map<std::int64_t, std::int64_t> output_slots;
  for (const TxRecord& tx : txs) {
    for (const auto& [addr, amount] : tx.inputs) ++input_slots[addr];
    for (const auto& [addr, amount] : tx.outputs) ++output_slots[addr];
  }
  const auto fresh_once = [&](std::int64_t addr) {
    return output_slots[addr] == 1 && input_slots.count(addr) == 0;
  };

  for (const TxRecord& tx : txs) {
    if (tx.inputs.empty() || tx.outputs.size() != 2) continue;
    const bool first = fresh_once(tx.outputs[0].first);
    const bool second = fresh_once(tx.outputs[1].first);
    if (first == second) continue;  // none or both: ambiguous
    const std::int64_t change =
        first ? tx.outputs[0].first : tx.outputs[1].first;
    partition.unite(tx.inputs[0].first, change);
  }
  return partition;
}

OccurrenceIndex build_occurrence_index(const std::vector<TxRecord>& txs,
                                       const AddressPartition& partition) {
  const SuperResolver resolver(partition);
  OccurrenceIndex index;
  std::set<std::int64_t> supers_in_tx;
  for (const TxRecord& tx : txs) {
    supers_in_tx.clear();
    for (const auto& [addr, amount] : tx.inputs)
      supers_in_tx.insert(resolver.super_of(addr));
    for (const auto& [addr, amount] : tx.outputs)
      supers_in_tx.insert(resolver.super_of(addr));
    for (std::int64_t super : supers_in_tx) ++index.count[super];
  }
  return index;
}

FilterResult filter_by_occurrence(const std::vector<TxRecord>& txs,
                                  const AddressPartition& partition,
                                  std::int64_t min_occ) {
  if (min_occ < 1)
    throw ValidationError("filter_by_occurrence: min_occ must be >= 1");

  const SuperResolver resolver(partition);
  const OccurrenceIndex occurrence = build_occurrence_index(txs, partition);

  FilterResult result;
  for (const auto& [super, count] : occurrence.count)
    if (count >= min_occ) result.surviving.insert(super);

  std::set<std::int64_t> distinct;
  for (const TxRecord& tx : txs) {
    TxRecord kept;
    kept.tx_id = tx.tx_id;
    distinct.clear();
    for (const auto& entry : tx.inputs) {
      const std::int64_t super = resolver.super_of(entry.first);
      if (!result.surviving.count(super)) continue;
      kept.inputs.push_back(entry);
      distinct.insert(super);
    }
    for (const auto& entry : tx.outputs) {
      const std::int64_t super = resolver.super_of(entry.first);
      if (!result.surviving.count(super)) continue;
      kept.outputs.push_back(entry);
      distinct.insert(super);
    }
    if (distinct.size() >= 2) result.txs.push_back(std::move(kept));
  }
  return result;
}

}  // namespace chaincluster
