"""Recomputes the zero-velocity report for one sequence and compares it
with the report.kv written by `eai eval --baseline zero-velocity`.

usage: zero_velocity_oracle.py SEQUENCE REPORT_KV OBSERVED FUTURE STRIDE
"""

import math
import sys

from eaim import read_eaim


def joint_error(pred, truth):
    joints = len(pred) // 3
    total = 0.0
    for j in range(joints):
        total += math.sqrt(sum((pred[3 * j + c] - truth[3 * j + c]) ** 2 for c in range(3)))
    return total / joints


def main():
    seq_path, kv_path = sys.argv[1], sys.argv[2]
    observed, future, stride = (int(x) for x in sys.argv[3:6])
    fps, parts = read_eaim(seq_path)
    frames = len(parts["body"])
    offsets = list(range(0, frames - observed - future + 1, stride))

    report = {}
    with open(kv_path) as f:
        for line in f:
            key, value = line.strip().split("=", 1)
            report[key] = value
    assert int(report["samples"]) == len(offsets), "sample count differs"

    joints = {"body": len(parts["body"][0]) // 3, "left": len(parts["left"][0]) // 3,
              "right": len(parts["right"][0]) // 3}
    worst = 0.0
    for seconds in ("0.2", "0.4", "1"):
        k = round(float(seconds) * fps)
        per_part = {}
        for name, rows in parts.items():
            errs = [joint_error(rows[o + observed - 1], rows[o + observed + k - 1]) for o in offsets]
            per_part[name] = sum(errs) / len(errs)
            worst = max(worst, abs(per_part[name] - float(report["mpjpe.%s.%s" % (name, seconds)])))
        whole = sum(joints[n] * per_part[n] for n in per_part) / sum(joints.values())
        worst = max(worst, abs(whole - float(report["mpjpe.whole_body.%s" % seconds])))
    # The report prints six decimals, so half a unit in the last place is
    # the best agreement possible.
    if worst > 5e-7 + 1e-9:
        print("zero-velocity oracle mismatch: %.3g" % worst)
        return 1
    print("zero-velocity oracle agrees (max deviation %.2g)" % worst)
    return 0


if __name__ == "__main__":
    sys.exit(main())
