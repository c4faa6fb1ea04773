#!/usr/bin/env python3
# Copyright 2026 The SFTW Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes synthetic AIS tracks for a single bulk port.

Two outputs:
  fixture: four hand-placed vessels used by the ingest tests.
  corpus:  a few hundred port calls queued FCFS behind a multi-berth
           terminal, with a metadata file and some dirty rows.

Output is a pure function of the arguments.
"""

import argparse
import csv
import datetime
import math
import random

EARTH_RADIUS_KM = 6371.0
CENTER = (-20.31, 118.57)
EPOCH = datetime.datetime(2024, 1, 1, tzinfo=datetime.timezone.utc)


def destination(distance_km, bearing_deg, center=CENTER):
  """Point at `distance_km` from `center` along `bearing_deg`."""
  lat1, lon1 = map(math.radians, center)
  b = math.radians(bearing_deg)
  d = distance_km / EARTH_RADIUS_KM
  lat2 = math.asin(math.sin(lat1) * math.cos(d) +
                   math.cos(lat1) * math.sin(d) * math.cos(b))
  lon2 = lon1 + math.atan2(math.sin(b) * math.sin(d) * math.cos(lat1),
                           math.cos(d) - math.sin(lat1) * math.sin(lat2))
  return math.degrees(lat2), math.degrees(lon2)


def stamp(hours):
  t = EPOCH + datetime.timedelta(hours=hours)
  return t.strftime('%Y-%m-%dT%H:%M:%SZ')


class Track:

  def __init__(self, vessel_id, bearing=0.0):
    self.vessel_id = vessel_id
    self.bearing = bearing
    self.rows = []

  def at(self, hour, km, sog):
    lat, lon = destination(km, self.bearing)
    self.rows.append((self.vessel_id, stamp(hour), f'{lat:.6f}', f'{lon:.6f}',
                      f'{sog:.1f}'))

  def stay(self, start, end, km, sog, step=1):
    h = start
    while h <= end + 1e-9:
      self.at(h, km, sog)
      h += step

  def sail(self, start, end, km_from, km_to, sog, step=1):
    h = start
    while h <= end + 1e-9:
      f = (h - start) / (end - start)
      self.at(h, km_from + f * (km_to - km_from), sog)
      h += step


def standard_call(vessel_id, offset):
  """Previous-port stop to hour 10, entry at hour 100, berth 132..168."""
  t = Track(vessel_id)
  t.stay(offset + 0, offset + 10, 300, 0.5)
  t.at(offset + 11, 295, 5)
  t.sail(offset + 12, offset + 99, 290, 62, 12)
  t.at(offset + 100, 59, 6)
  t.stay(offset + 101, offset + 131, 20, 0.2)
  t.stay(offset + 132, offset + 168, 1, 0.1)
  t.sail(offset + 169, offset + 200, 5, 150, 11)
  return t


def fixture():
  tracks = [standard_call('V1', 0), standard_call('V2', 4),
            standard_call('V3', 8)]
  # Anchors 55 km out and leaves: a port entry at 60 km but not at 50 km.
  skirt = Track('V4')
  skirt.sail(0, 50, 300, 62, 12)
  skirt.stay(51, 61, 55, 0.3)
  skirt.sail(62, 80, 62, 300, 12)
  tracks.append(skirt)
  rows = [r for t in tracks for r in t.rows]
  return rows, None


def corpus(seed, calls, service_gap):
  rng = random.Random(seed)
  rows = []
  metadata = []
  berth_free = 0.0
  entry = 0.0
  for k in range(calls):
    vessel_id = f'9{k:06d}'
    bearing = rng.uniform(200, 340)  # open sea to the west and north
    entry += rng.expovariate(1 / (service_gap * 1.05))
    entry_h = round(entry)
    # FCFS acceptance with jittered spacing at the terminal.
    gap = max(0.5, rng.gauss(service_gap, 1.0))
    start = max(entry_h + 2, round(berth_free + gap))
    berth_free = start
    service = min(400, max(8, round(rng.lognormvariate(math.log(36), 0.35))))
    prev_km = rng.uniform(250, 450)
    stop_h = rng.randint(7, 14)
    sail_h = max(12, round((prev_km - 62) / (rng.uniform(11, 14) * 1.852)))
    t = Track(vessel_id, bearing)
    t0 = entry_h - sail_h - 2 - stop_h
    t.stay(t0, t0 + stop_h, prev_km, rng.uniform(0, 1.5))
    t.at(t0 + stop_h + 1, prev_km - 3, rng.uniform(3, 7))
    t.sail(t0 + stop_h + 2, entry_h - 1, prev_km - 8, 62, rng.uniform(10, 14))
    anchor_km = rng.uniform(12, 40)
    t.at(entry_h, 58, rng.uniform(5, 9))
    if start - 1 > entry_h + 1:
      t.stay(entry_h + 1, start - 1, anchor_km, rng.uniform(0, 1.2))
    t.stay(start, start + service, rng.uniform(0.2, 2.5), rng.uniform(0, 0.4))
    t.sail(start + service + 1, start + service + 20, 5, 250, 12)
    rows.extend(t.rows)
    metadata.append((vessel_id, 'Bulk Carrier'))

  # Traffic that should not become voyages.
  for k in range(20):
    vessel_id = f'8{k:06d}'
    t = Track(vessel_id, rng.uniform(200, 340))
    base = rng.uniform(0, entry)
    if k % 2:
      t.sail(base, base + 60, 400, 20, 12)  # tanker calling at the port
      t.stay(base + 61, base + 90, 1.5, 0.1)
      t.sail(base + 91, base + 120, 20, 400, 12)
      metadata.append((vessel_id, 'Tanker'))
    else:
      t.sail(base, base + 80, 500, 80, 13)  # passes by without stopping
      t.sail(base + 81, base + 160, 80, 500, 13)
      metadata.append((vessel_id, 'Bulk Carrier'))
    rows.extend(t.rows)

  # Dirty rows: impossible speed, duplicate timestamp, broken lines.
  noisy = rng.sample(range(len(rows)), 40)
  for i in noisy[:15]:
    v, ts, lat, lon, _ = rows[i]
    rows.append((v, ts + '', lat, lon, '55.0'))
  for i in noisy[15:30]:
    rows.append(rows[i])
  for i in noisy[30:]:
    rows.append((rows[i][0], 'not-a-time', rows[i][2], rows[i][3], '1.0'))
  rows.sort(key=lambda r: (r[1], r[0]))
  return rows, metadata


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument('kind', choices=['fixture', 'corpus'])
  parser.add_argument('--out', required=True, help='AIS CSV to write')
  parser.add_argument('--metadata', help='vessel metadata CSV to write')
  parser.add_argument('--seed', type=int, default=20240101)
  parser.add_argument('--calls', type=int, default=240)
  parser.add_argument('--service-gap', type=float, default=4.0)
  args = parser.parse_args()

  if args.kind == 'fixture':
    rows, metadata = fixture()
  else:
    rows, metadata = corpus(args.seed, args.calls, args.service_gap)
  with open(args.out, 'w', newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(['vessel_id', 'timestamp', 'lat', 'lon', 'sog'])
    w.writerows(rows)
  if args.metadata and metadata:
    with open(args.metadata, 'w', newline='') as f:
      w = csv.writer(f, lineterminator='\n')
      w.writerow(['vessel_id', 'ship_type'])
      w.writerows(sorted(metadata))


if __name__ == '__main__':
  main()
