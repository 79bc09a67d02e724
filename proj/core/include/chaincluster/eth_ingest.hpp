#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "chaincluster/linalg.hpp"

namespace chaincluster {

// One user's aggregated balance of one token, in token units.
struct HoldingRecord {
  std::string user;
  std::string token;
  double amount = 0.0;
};

// N x T user-token matrix in ETH value. Row and column orderings are the
// index maps for every downstream label.
struct AttentionMatrix {
  std::vector<std::string> users;   // rows, lexicographic
  std::vector<std::string> tokens;  // columns, lexicographic
  Matrix values;
};

// CSV with header `user,token,amount`.
std::vector<HoldingRecord> read_holdings_csv(std::istream& source);

// CSV with header `token,eth_price`.
std::map<std::string, double> read_prices_csv(std::istream& source);

// A[i][j] = sum of user i's holdings of token j, times the token's ETH
// price. Every token present in the holdings must have a price.
AttentionMatrix build_attention_matrix(
    const std::vector<HoldingRecord>& holdings,
    const std::map<std::string, double>& prices);

// Removes rows with fewer than min_tokens_per_user nonzero entries, then
// columns with fewer than min_users_per_token nonzero entries, in that
// order. Errors if nothing is left.
AttentionMatrix filter_bipartite(const AttentionMatrix& matrix,
                                 int min_tokens_per_user,
                                 int min_users_per_token);

// Scales each row to unit Euclidean norm, then each column, one pass each.
// Zero rows or columns must be filtered out first.
AttentionMatrix normalize_rows_cols(const AttentionMatrix& matrix);

}  // namespace chaincluster
