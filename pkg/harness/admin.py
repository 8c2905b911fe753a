from django.contrib import admin
from .models import SuiteRun, CheckRecord


class CheckRecordInline(admin.TabularInline):
    model = CheckRecord
    extra = 0
    can_delete = False
    fields = ['position', 'check_id', 'profile', 'lhs', 'rhs', 'passed']
    readonly_fields = fields


class ReadOnlyAdmin(admin.ModelAdmin):

    def has_add_permission(self, request, obj=None):
        return False

    def has_change_permission(self, request, obj=None):
        return False


@admin.register(SuiteRun)
class SuiteRunAdmin(ReadOnlyAdmin):
    list_display  = ['__str__', 'seed', 'exit_code', 'finished_at']
    list_filter   = ['exit_code']
    search_fields = ['summary', 'output']
    readonly_fields = ['config', 'seed', 'output', 'started_at', 'finished_at', 'exit_code', 'summary']
    inlines = [CheckRecordInline]


@admin.register(CheckRecord)
class CheckRecordAdmin(ReadOnlyAdmin):
    list_display  = ['check_id', 'run', 'profile', 'mode', 'ratio', 'passed']
    list_filter   = ['mode', 'passed', 'check_id']
    search_fields = ['check_id', 'anchor', 'profile']
    readonly_fields = ['run', 'position', 'check_id', 'anchor', 'mode', 'profile',
                       'params', 'exponents', 'report', 'lhs', 'rhs', 'ratio', 'passed']
