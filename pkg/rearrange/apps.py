from django.apps import AppConfig


class RearrangeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'rearrange'
