"""
Disponibilidade dos veículos na grade de passos do dia.

Uma reserva [t_start, t_end) tira o veículo da estação do passo de saída
floor(t_start/Δt) até o passo de volta ceil(t_end/Δt), exclusivo. A energia
da viagem (drive_km · consumo) é descontada no passo de saída.
"""
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from corpus.exceptions import InfeasibleScheduleError
from v2g.tariff import DAY_MINUTES, n_steps

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-9
ON_INFEASIBLE = ('raise', 'skip')


@dataclass(frozen=True)
class DepartureRequirement:
    reservation_id: int
    vehicle_id: int
    step: int
    return_step: int
    energy_kwh: float
    soc_required: float


@dataclass(frozen=True)
class AvailabilityProfile:
    timestep_minutes: int
    vehicle_ids: np.ndarray
    station_ids: np.ndarray
    capacity_kwh: np.ndarray
    max_charge_kw: np.ndarray
    max_discharge_kw: np.ndarray
    soc_min: np.ndarray
    soc_max: np.ndarray
    soc_initial: np.ndarray
    soc_terminal: np.ndarray
    at_station: np.ndarray
    drain_kwh: np.ndarray
    requirements: tuple = ()
    skipped: tuple = ()
    eta_charge: float = 0.95
    eta_discharge: float = 0.95

    @property
    def n_vehicles(self):
        return len(self.vehicle_ids)

    @property
    def n_steps(self):
        return self.at_station.shape[1]

    @property
    def dt_hours(self):
        return self.timestep_minutes / 60.0

    def station_groups(self):
        """Índices dos veículos por estação, estações e veículos em ordem crescente."""
        grupos = {}
        for i in np.argsort(self.vehicle_ids, kind='stable'):
            grupos.setdefault(int(self.station_ids[i]), []).append(int(i))
        return {sid: np.array(grupos[sid]) for sid in sorted(grupos)}

    def subset(self, indices):
        indices = np.asarray(indices, dtype=int)
        escolhidos = {int(self.vehicle_ids[i]) for i in indices}
        return replace(
            self,
            vehicle_ids=self.vehicle_ids[indices],
            station_ids=self.station_ids[indices],
            capacity_kwh=self.capacity_kwh[indices],
            max_charge_kw=self.max_charge_kw[indices],
            max_discharge_kw=self.max_discharge_kw[indices],
            soc_min=self.soc_min[indices],
            soc_max=self.soc_max[indices],
            soc_initial=self.soc_initial[indices],
            soc_terminal=self.soc_terminal[indices],
            at_station=self.at_station[indices],
            drain_kwh=self.drain_kwh[indices],
            requirements=tuple(r for r in self.requirements if r.vehicle_id in escolhidos),
            skipped=tuple(r for r in self.skipped if r[1] in escolhidos),
        )


def _vehicle_rows(vehicle, reservas, timestep, T):
    disponivel = np.ones(T, dtype=bool)
    dreno = np.zeros(T)
    exigencias = []
    for r in reservas:
        saida = r.t_start // timestep
        volta = min(int(math.ceil(r.t_end / timestep)), T)
        energia = r.drive_km * vehicle.consumption_kwh_per_km
        disponivel[saida:volta] = False
        dreno[saida] += energia
        exigencias.append(DepartureRequirement(
            reservation_id=r.reservation_id,
            vehicle_id=vehicle.vehicle_id,
            step=int(saida),
            return_step=int(volta),
            energy_kwh=float(energia),
            soc_required=float(vehicle.soc_min + energia / vehicle.battery_kwh),
        ))
    return disponivel, dreno, exigencias


def _max_trajectory(vehicle, soc0, disponivel, dreno, dt, eta_c):
    """SOC com carga máxima sempre que possível; devolve (trajetória, passo inviável ou None)."""
    soc = np.empty(len(disponivel) + 1)
    soc[0] = soc0
    ganho = eta_c * vehicle.max_charge_kw * dt / vehicle.battery_kwh
    for t in range(len(disponivel)):
        soc[t + 1] = min(vehicle.soc_max, soc[t] + ganho * disponivel[t]) - dreno[t] / vehicle.battery_kwh
        if soc[t + 1] < vehicle.soc_min - FEASIBILITY_TOL:
            return soc, t
    return soc, None


def build_availability(reservations, vehicles, timestep_minutes=None, on_infeasible='raise',
                       soc_initial=None, terminal=True):
    """
    Monta o perfil de disponibilidade da frota para um dia.

    `on_infeasible='skip'` descarta (com aviso) as reservas que o veículo não
    consegue atender e segue com as demais. `terminal=False` dispensa a
    exigência de terminar o dia com SOC ≥ min(SOC inicial, alcançável).
    """
    if on_infeasible not in ON_INFEASIBLE:
        raise ValidationError(f"on_infeasible deve ser um de {ON_INFEASIBLE}", code='invalid')
    timestep = timestep_minutes or settings.DEFAULT_TIMESTEP_MINUTES
    T = n_steps(timestep)
    dt = timestep / 60.0
    eta_c, eta_d = settings.CHARGE_EFFICIENCY, settings.DISCHARGE_EFFICIENCY
    frota = sorted(vehicles, key=lambda v: v.vehicle_id)
    ids = {v.vehicle_id for v in frota}

    por_veiculo = {}
    ignoradas = 0
    for r in reservations:
        if r.vehicle_id not in ids:
            raise ValidationError(
                f"reserva {r.reservation_id} referencia veículo inexistente {r.vehicle_id}", code='invalid',
            )
        if r.t_start >= DAY_MINUTES:
            ignoradas += 1
            continue
        por_veiculo.setdefault(r.vehicle_id, []).append(r)
    if ignoradas:
        logger.warning("%d reservas começam depois do primeiro dia e foram ignoradas", ignoradas)

    linhas_disp, linhas_dreno, iniciais, terminais = [], [], [], []
    exigencias, descartadas = [], []
    for v in frota:
        reservas = sorted(por_veiculo.get(v.vehicle_id, []), key=lambda r: (r.t_start, r.reservation_id))
        soc0 = float(np.clip(settings.SOC_INITIAL if soc_initial is None else soc_initial, v.soc_min, v.soc_max))

        while True:
            for r in reservas:
                energia = r.drive_km * v.consumption_kwh_per_km
                if energia > v.usable_kwh + FEASIBILITY_TOL:
                    _infeasible(
                        on_infeasible, r, v,
                        f"reserva {r.reservation_id}: viagem de {energia:.2f} kWh excede os "
                        f"{v.usable_kwh:.2f} kWh úteis do veículo {v.vehicle_id}",
                    )
                    descartadas.append((r.reservation_id, v.vehicle_id))
            reservas = [r for r in reservas if (r.reservation_id, v.vehicle_id) not in set(descartadas)]
            disponivel, dreno, reqs = _vehicle_rows(v, reservas, timestep, T)
            trajetoria, passo = _max_trajectory(v, soc0, disponivel, dreno, dt, eta_c)
            if passo is None:
                break
            culpada = next(r for r, q in zip(reservas, reqs) if q.step == passo)
            _infeasible(
                on_infeasible, culpada, v,
                f"reserva {culpada.reservation_id}: SOC {trajetoria[passo]:.3f} na saída do veículo "
                f"{v.vehicle_id} não cobre os {reqs[reservas.index(culpada)].energy_kwh:.2f} kWh da viagem",
            )
            descartadas.append((culpada.reservation_id, v.vehicle_id))
            reservas = [r for r in reservas if r is not culpada]

        linhas_disp.append(disponivel)
        linhas_dreno.append(dreno)
        exigencias.extend(reqs)
        iniciais.append(soc0)
        terminais.append(min(soc0, trajetoria[-1]) if terminal else v.soc_min)

    def coluna(atributo):
        return np.array([getattr(v, atributo) for v in frota], dtype=float)

    perfil = AvailabilityProfile(
        timestep_minutes=timestep,
        vehicle_ids=np.array([v.vehicle_id for v in frota], dtype=int),
        station_ids=np.array([v.station_id for v in frota], dtype=int),
        capacity_kwh=coluna('battery_kwh'),
        max_charge_kw=coluna('max_charge_kw'),
        max_discharge_kw=coluna('max_discharge_kw'),
        soc_min=coluna('soc_min'),
        soc_max=coluna('soc_max'),
        soc_initial=np.array(iniciais, dtype=float),
        soc_terminal=np.array(terminais, dtype=float),
        at_station=np.array(linhas_disp, dtype=bool).reshape(len(frota), T),
        drain_kwh=np.array(linhas_dreno, dtype=float).reshape(len(frota), T),
        requirements=tuple(exigencias),
        skipped=tuple(descartadas),
        eta_charge=eta_c,
        eta_discharge=eta_d,
    )
    logger.info(
        "disponibilidade: %d veículos, %d passos de %d min, %d saídas, %d reservas descartadas",
        perfil.n_vehicles, T, timestep, len(exigencias), len(descartadas),
    )
    return perfil


def _infeasible(on_infeasible, reserva, veiculo, mensagem):
    if on_infeasible == 'raise':
        raise InfeasibleScheduleError(mensagem, reservation_id=reserva.reservation_id, vehicle_id=veiculo.vehicle_id)
    logger.warning("%s; reserva descartada", mensagem)
