"""
Modelo de dados canônico compartilhado por todos os apps.
Nada aqui é persistido em banco: são registros imutáveis trocados via CSV.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from django.conf import settings
from django.db import models


class Category(models.TextChoices):
    BUDGET = 'Budget', 'Budget'
    COMBI = 'Combi', 'Combi'
    PREMIUM = 'Premium', 'Premium'
    TRANSPORTER = 'Transporter', 'Transporter'
    OTHER = 'Other', 'Outro'


class Gender(models.TextChoices):
    FEMALE = 'F', 'Feminino'
    MALE = 'M', 'Masculino'
    OTHER = 'O', 'Outro'


class PtSubscription(models.TextChoices):
    NONE = 'none', 'Nenhuma'
    HALF_FARE = 'half_fare', 'Meia tarifa'
    FULL_FARE = 'full_fare', 'Abonamento geral'


class Purpose(models.TextChoices):
    HOME = 'home', 'Casa'
    LEISURE = 'leisure', 'Lazer'
    WORK = 'work', 'Trabalho'
    SHOPPING = 'shopping', 'Compras'
    EDUCATION = 'education', 'Educação'
    OTHER = 'other', 'Outro'


class Mode(models.TextChoices):
    CAR = 'Car', 'Carro próprio'
    CAR_SHARING = 'CarSharing', 'Carro compartilhado'
    TRAIN = 'Train', 'Trem'
    BUS = 'Bus', 'Ônibus'
    TRAM = 'Tram', 'Bonde'
    BICYCLE = 'Bicycle', 'Bicicleta'
    WALK = 'Walk', 'A pé'
    OTHER = 'Other', 'Outro'


@dataclass(frozen=True)
class Station:
    station_id: int
    x: float
    y: float
    vehicle_ids: tuple = ()
    grid_zone_id: int | None = None

    def distance_to(self, x, y):
        return math.hypot(self.x - x, self.y - y)


@dataclass(frozen=True)
class Vehicle:
    vehicle_id: int
    station_id: int
    category: str
    battery_kwh: float
    max_charge_kw: float
    max_discharge_kw: float
    consumption_kwh_per_km: float
    soc_min: float = 0.1
    soc_max: float = 0.95

    @classmethod
    def from_model(cls, vehicle_id, station_id, category):
        """Cria um veículo com o modelo de VE configurado para a categoria."""
        modelo = settings.VEHICLE_MODELS[category]
        return cls(
            vehicle_id=vehicle_id,
            station_id=station_id,
            category=category,
            soc_min=settings.SOC_MIN,
            soc_max=settings.SOC_MAX,
            **modelo,
        )

    @property
    def usable_kwh(self):
        return (self.soc_max - self.soc_min) * self.battery_kwh


@dataclass(frozen=True)
class Agent:
    agent_id: int
    age_group: int
    gender: str
    home_x: float
    home_y: float
    car_access: bool
    pt_subscription: str


@dataclass(frozen=True)
class Trip:
    trip_id: int
    agent_id: int
    origin_x: float
    origin_y: float
    dest_x: float
    dest_y: float
    purpose_origin: str
    purpose_dest: str
    t_dest_start: int
    distance_m: float


@dataclass(frozen=True)
class Reservation:
    reservation_id: int
    vehicle_id: int
    agent_id: int
    station_id: int
    t_start: int
    t_end: int
    drive_km: float
    forced_return: bool = False

    @property
    def duration(self):
        return self.t_end - self.t_start


@dataclass(frozen=True)
class ScenarioConfig:
    n_users: int
    v_desired: int
    k_new_stations: int = 0
    price_levels: tuple | None = None
    timestep_minutes: int | None = None
    seed: int = 0
    category_shares: dict | None = field(default=None, hash=False)
    population_size: int | None = None
    preset: int | None = None
    new_station_vehicles: int | None = None
    start_weekday: int | None = None


class DatasetBundle(NamedTuple):
    stations: tuple = ()
    vehicles: tuple = ()
    agents: tuple = ()
    trips: tuple = ()
    reservations: tuple = ()
    dso_load: tuple = ()


def attach_vehicles(stations, vehicles):
    """Recalcula Station.vehicle_ids a partir da coluna station_id dos veículos."""
    por_estacao = {}
    for vehicle in sorted(vehicles, key=lambda v: v.vehicle_id):
        por_estacao.setdefault(vehicle.station_id, []).append(vehicle.vehicle_id)
    return tuple(
        Station(
            station_id=s.station_id,
            x=s.x,
            y=s.y,
            vehicle_ids=tuple(por_estacao.get(s.station_id, ())),
            grid_zone_id=s.grid_zone_id,
        )
        for s in sorted(stations, key=lambda s: s.station_id)
    )
