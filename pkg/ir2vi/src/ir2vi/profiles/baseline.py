"""Toy run of the plain cycle-consistent baseline: no structure connection, no ROI terms."""

import copy

from ir2vi.profiles.toy import TOY_PROFILE

BASELINE_PROFILE = copy.deepcopy(TOY_PROFILE)
BASELINE_PROFILE["name"] = "baseline"
BASELINE_PROFILE["generator"]["structure_connection"] = False
BASELINE_PROFILE["train"]["weights"] = {"lambda_cyc": 5.0, "lambda_roi": 0.0}
