"""Configure Django for pytest the same way ``backend/manage.py`` does."""
import os
import sys
from pathlib import Path

BACKEND_DIR = Path(__file__).resolve().parent / "backend"
if str(BACKEND_DIR) not in sys.path:
    sys.path.insert(0, str(BACKEND_DIR))

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "berezinlab.settings")

import django  # noqa: E402

django.setup()
