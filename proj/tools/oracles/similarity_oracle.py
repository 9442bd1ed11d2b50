# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Emits the frozen name-similarity oracle table used by the unit tests.

Values come from Python's difflib.SequenceMatcher (Ratcliff/Obershelp) with
autojunk disabled, evaluated with the two names in sorted order so the
result is symmetric.

    python3 tools/oracles/similarity_oracle.py > tests/unit/similarity_oracle.inc
"""
import difflib
import random

NAMED = [
    ("cust_id", "customer_id"), ("customer_id", "customer_key"), ("o_custkey", "c_custkey"),
    ("id", "identifier"), ("order_date", "orderdate"), ("abc", "xyz"), ("nation_key", "n_nationkey"),
    ("ps_partkey", "p_partkey"), ("l_orderkey", "o_orderkey"), ("age", "page"), ("zip", "zipcode"),
    ("customer_id", "l_partkey"), ("id_customer", "key_order"), ("", "abc"), ("same", "same"),
]


LICENSE = [
    'Licensed under the Apache License, Version 2.0 (the "License");',
    "you may not use this file except in compliance with the License.",
    "You may obtain a copy of the License at",
    "",
    "    https://www.apache.org/licenses/LICENSE-2.0",
    "",
    "Unless required by applicable law or agreed to in writing, software",
    'distributed under the License is distributed on an "AS IS" BASIS,',
    "WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.",
    "See the License for the specific language governing permissions and",
    "limitations under the License.",
]


def ratio(a, b):
    if a == b:
        return 1.0
    x, y = sorted([a, b])
    return difflib.SequenceMatcher(None, x, y, autojunk=False).ratio()


def main():
    rng = random.Random(7)
    pairs = list(NAMED)
    for _ in range(200):
        a = "".join(rng.choice("abcde_") for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice("abcde_") for _ in range(rng.randint(0, 12)))
        pairs.append((a, b))
    for line in LICENSE:
        print("//" + (" " + line if line else ""))
    print()
    print("// Generated by tools/oracles/similarity_oracle.py; do not edit.")
    for a, b in pairs:
        print(f'{{"{a}", "{b}", {ratio(a, b)!r}}},')


if __name__ == "__main__":
    main()
