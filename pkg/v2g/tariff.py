"""Tarifa de energia por horário (CHF/kWh) na grade de passos do dia."""
import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

DAY_MINUTES = 1440


def n_steps(timestep_minutes):
    if timestep_minutes <= 0 or DAY_MINUTES % timestep_minutes:
        raise ValidationError(f"timestep de {timestep_minutes} min não divide o dia", code='invalid')
    return DAY_MINUTES // timestep_minutes


def steps_per_hour(timestep_minutes):
    if timestep_minutes > 60 or 60 % timestep_minutes:
        raise ValidationError(f"timestep de {timestep_minutes} min não divide a hora", code='invalid')
    return 60 // timestep_minutes


def validate_tariff(tariff):
    tariff = np.asarray(tariff, dtype=float)
    if np.any(tariff < 0) or not np.all(np.isfinite(tariff)):
        raise ValidationError("tarifa de energia negativa ou não finita", code='invalid')
    return tariff


def time_of_use_tariff(timestep_minutes, peak=None, offpeak=None, peak_hours=None):
    """Ponta em [início, fim) de TARIFF_PEAK_HOURS, fora de ponta no resto."""
    peak = settings.TARIFF_PEAK if peak is None else peak
    offpeak = settings.TARIFF_OFFPEAK if offpeak is None else offpeak
    inicio, fim = settings.TARIFF_PEAK_HOURS if peak_hours is None else peak_hours
    horas = np.arange(n_steps(timestep_minutes)) * timestep_minutes / 60.0
    return validate_tariff(np.where((horas >= inicio) & (horas < fim), peak, offpeak))


def discharge_credit(tariff, reimbursement=None):
    """Crédito pela energia devolvida à rede: a tarifa, só com reembolso ligado."""
    reimbursement = settings.GRID_REIMBURSEMENT if reimbursement is None else reimbursement
    tariff = validate_tariff(tariff)
    return tariff.copy() if reimbursement else np.zeros_like(tariff)
