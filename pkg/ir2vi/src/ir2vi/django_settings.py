"""Settings for the django app of ir2vi"""

import os
from pathlib import Path

# WORKSPACE ROOT
# django_settings.py lives at <root>/ir2vi/src/ir2vi/django_settings.py
# so parents[3] is the workspace root.
BASE_DIR = Path(__file__).resolve().parents[3]

# PATHS
IR2VI_DATA_ROOT = BASE_DIR / "data"
IR2VI_SYNTH_ROOT = IR2VI_DATA_ROOT / "synthetic"
# Every run writes below this root unless an explicit --out-dir is given
IR2VI_OUTPUT_ROOT = Path(os.environ.get("IR2VI_OUTPUT_ROOT", BASE_DIR / "runs"))

# PUBLISHED DEFAULTS
IR2VI_LAMBDA_CYC = 5.0
IR2VI_LAMBDA_ROI = 0.1
IR2VI_LR = 2e-4
IR2VI_EPOCHS_CONST = 20
IR2VI_EPOCHS_DECAY = 20
IR2VI_BATCH_SIZE = 2
IR2VI_ADAM_BETAS = (0.5, 0.999)
IR2VI_INIT_STD = 0.02
IR2VI_LEAKY_SLOPE = 0.2
IR2VI_CROP_SIZE = 256
IR2VI_ROI_SIZE = 64
IR2VI_REPLAY_BUFFER = 50

# EVALUATION
IR2VI_IOU_THRESHOLD = 0.5

# DJANGO
SECRET_KEY = "ir2vi-standalone-not-for-production"
DEBUG = False
USE_TZ = False

# Registered only so that the management commands (the CLI) are discovered
INSTALLED_APPS = [
    "ir2vi",
]

# No ORM models: every artifact is a file (PNG, JSON-lines, CSV, checkpoint)
DATABASES = {}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
