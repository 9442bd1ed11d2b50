// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small two-table fixture: customers(cust_id, segment, age, signup) and
// orders(customer_id, amount, status, order_date).

#include <vector>

#include "driftgen/profile.hpp"
#include "helpers.hpp"

namespace driftgen::test {

inline Table customers_table() {
  std::vector<std::string> seg, signup;
  for (int i = 0; i < 20; ++i) {
    seg.push_back(i % 3 == 0 ? "retail" : (i % 3 == 1 ? "corporate" : "O'Brien & Co"));
    signup.push_back("2020-01-" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1));
  }
  return Table("customers", {numeric_column("cust_id", iota_values(1, 20)), text_column("segment", seg),
                             numeric_column("age", iota_values(20, 20)), text_column("signup", signup)});
}

inline Table orders_table() {
  std::vector<double> cust, amount;
  std::vector<std::string> status, date;
  for (int i = 0; i < 60; ++i) {
    cust.push_back(1 + (i * 7) % 25);  // ids 21..25 have no customer
    amount.push_back(10.0 + i * 2.5);
    status.push_back(i % 4 == 0 ? "open" : "closed");
    date.push_back("2021-03-" + std::string(i % 28 + 1 < 10 ? "0" : "") + std::to_string(i % 28 + 1));
  }
  return Table("orders", {numeric_column("customer_id", cust), numeric_column("amount", amount),
                          text_column("status", status), text_column("order_date", date)});
}

inline std::vector<TableSchema> two_schemas() {
  return {extract_schema(customers_table()), extract_schema(orders_table())};
}

}  // namespace driftgen::test
