"""
WSGI config for the fkalab project.

Only the admin (archived suite runs) is served.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fkalab.settings')

application = get_wsgi_application()
