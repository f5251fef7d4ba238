#!/usr/bin/env python3
# Copyright 2026 The Bento Authors
# SPDX-License-Identifier: Apache-2.0

"""Echo fixture: reports its parameters back as samples."""

import json
import os
import sys


def main():
    with open(sys.argv[1]) as f:
        control = json.load(f)
    phase = control["phase"]
    out = control["output_path"]
    if phase == "prepare":
        with open(os.path.join(out, "prepared.json"), "w") as f:
            json.dump(control["tests"], f)
    elif phase == "run":
        params = control["params"]
        with open(out, "w") as f:
            for i in range(params["count"]):
                f.write(json.dumps({"metric": "latency", "value": params["value"] * (i + 1),
                                    "unit": "us", "wall_time_ns": i}) + "\n")
            f.write(json.dumps({"metric": "echo", "value": len(params["message"]),
                                "unit": "chars"}) + "\n")
        with open(os.path.join(os.path.dirname(out), "echoed_params.json"), "w") as f:
            json.dump(params, f, sort_keys=True)
    elif phase == "report":
        with open(out, "w") as f:
            for t in control["tests"]:
                f.write(json.dumps({"test_id": t["test_id"], "metric": "echo",
                                    "unit": "characters"}) + "\n")
    elif phase == "clean":
        marker = os.path.join(out, "prepared.json")
        if os.path.exists(marker):
            os.remove(marker)
    return 0


if __name__ == "__main__":
    sys.exit(main())
