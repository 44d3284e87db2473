"""pytest wiring: configure the project's django settings before collection."""

import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "ir2vi.django_settings")
django.setup()
