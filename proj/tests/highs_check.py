# Copyright 2026 The Reroute Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves emitted LP files with HiGHS and compares R with the exact search.

Usage: highs_check.py <reroute binary> <instance.json>...
Exits 77 (skipped) when highspy is not installed.
"""

import os
import re
import subprocess
import sys
import tempfile

try:
    import highspy
except ImportError:
    print("highspy not installed; skipping")
    sys.exit(77)


def main():
    tool, instances = sys.argv[1], sys.argv[2:]
    failed = False
    with tempfile.TemporaryDirectory() as tmp:
        for inst in instances:
            lp = os.path.join(tmp, "model.lp")
            subprocess.run([tool, "mip", inst, "-o", lp], check=True, capture_output=True)
            search = subprocess.run([tool, "oracle", inst], capture_output=True, text=True)
            found = re.search(r"rounds: (\d+)", search.stdout)
            h = highspy.Highs()
            h.setOptionValue("output_flag", False)
            h.readModel(lp)
            h.run()
            status = h.modelStatusToString(h.getModelStatus())
            if found:
                # R >= 1 even when nothing has to change.
                rounds = max(1, int(found.group(1)))
                value = h.getInfo().objective_function_value
                ok = status == "Optimal" and round(value) == rounds
                got = f"R={value:g}"
            else:
                rounds = "infeasible"
                ok = status == "Infeasible"
                got = ""
            failed |= not ok
            print(f"{os.path.basename(inst)}: HiGHS {status} {got}, search {rounds}"
                  f" {'ok' if ok else 'MISMATCH'}")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
