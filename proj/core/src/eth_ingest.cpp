#include "chaincluster/eth_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <utility>

#include "chaincluster/errors.hpp"

namespace chaincluster {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

double parse_decimal(const std::string& field, std::size_t line_number) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError("expected decimal, got '" + field + "'", line_number);
  return value;
}

void expect_header(std::istream& source, const std::string& expected) {
  std::string line;
  if (!std::getline(source, line))
    throw ParseError("missing header '" + expected + "'", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected)
    throw ParseError("expected header '" + expected + "', got '" + line + "'",
                     1);
}

}  // namespace

std::vector<HoldingRecord> read_holdings_csv(std::istream& source) {
  expect_header(source, "user,token,amount");
  std::vector<HoldingRecord> records;
  std::string line;
  std::size_t line_number = 1;
  while (std::getline(source, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw ParseError("expected 3 fields", line_number);
    HoldingRecord record{fields[0], fields[1],
                         parse_decimal(fields[2], line_number)};
    if (record.amount < 0.0)
      throw ValidationError("negative amount on line " +
                            std::to_string(line_number));
    records.push_back(std::move(record));
  }
  return records;
}

std::map<std::string, double> read_prices_csv(std::istream& source) {
  expect_header(source, "token,eth_price");
  std::map<std::string, double> prices;
  std::string line;
  std::size_t line_number = 1;
  while (std::getline(source, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw ParseError("expected 2 fields", line_number);
    const double price = parse_decimal(fields[1], line_number);
    if (price < 0.0)
      throw ValidationError("negative price on line " +
                            std::to_string(line_number));
    prices[fields[0]] = price;
  }
  return prices;
}

AttentionMatrix build_attention_matrix(
    const std::vector<HoldingRecord>& holdings,
    const std::map<std::string, double>& prices) {
  std::map<std::pair<std::string, std::string>, double> aggregated;
  for (const HoldingRecord& record : holdings) {
    if (record.amount < 0.0)
      throw ValidationError("negative holding amount for user " + record.user);
    if (!prices.count(record.token))
      throw ValidationError("no price for token " + record.token);
    aggregated[{record.user, record.token}] += record.amount;
  }

  AttentionMatrix matrix;
  {
    std::map<std::string, Eigen::Index> users, tokens;
    for (const auto& [key, amount] : aggregated) {
      users.emplace(key.first, 0);
      tokens.emplace(key.second, 0);
    }
    for (auto& [user, idx] : users) {
      idx = static_cast<Eigen::Index>(matrix.users.size());
      matrix.users.push_back(user);
    }
    for (auto& [token, idx] : tokens) {
      idx = static_cast<Eigen::Index>(matrix.tokens.size());
      matrix.tokens.push_back(token);
    }
    matrix.values = Matrix::Zero(static_cast<Eigen::Index>(matrix.users.size()),
                                 static_cast<Eigen::Index>(matrix.tokens.size()));
    for (const auto& [key, amount] : aggregated)
      matrix.values(users[key.first], tokens[key.second]) =
          amount * prices.at(key.second);
  }
  return matrix;
}

AttentionMatrix filter_bipartite(const AttentionMatrix& matrix,
                                 int min_tokens_per_user,
                                 int min_users_per_token) {
  if (min_tokens_per_user < 0 || min_users_per_token < 0)
    throw ValidationError("filter_bipartite: thresholds must be >= 0");

  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    const Eigen::Index count =
        (matrix.values.row(i).array() != 0.0).count();
    if (count >= min_tokens_per_user) rows.push_back(i);
  }

  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
    Eigen::Index count = 0;
    for (Eigen::Index i : rows)
      if (matrix.values(i, j) != 0.0) ++count;
    if (count >= min_users_per_token) cols.push_back(j);
  }

  if (rows.empty() || cols.empty())
    throw ValidationError("filter removed all nodes");

  AttentionMatrix filtered;
  filtered.values.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    filtered.users.push_back(matrix.users[rows[i]]);
    for (std::size_t j = 0; j < cols.size(); ++j)
      filtered.values(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) =
          matrix.values(rows[i], cols[j]);
  }
  for (Eigen::Index j : cols) filtered.tokens.push_back(matrix.tokens[j]);
  return filtered;
}

AttentionMatrix normalize_rows_cols(const AttentionMatrix& matrix) {
  AttentionMatrix normalized = matrix;
  for (Eigen::Index i = 0; i < normalized.values.rows(); ++i) {
    const double norm = normalized.values.row(i).norm();
    if (norm <= 0.0)
      throw ValidationError("normalize_rows_cols: zero row " +
                            std::to_string(i) + ", filter first");
    normalized.values.row(i) /= norm;
  }
  for (Eigen::Index j = 0; j < normalized.values.cols(); ++j) {
    const double norm = normalized.values.col(j).norm();
    if (norm <= 0.0)
      throw ValidationError("normalize_rows_cols: zero column " +
                            std::to_string(j) + ", filter first");
    normalized.values.col(j) /= norm;
  }
  return normalized;
}

}  // namespace chaincluster
